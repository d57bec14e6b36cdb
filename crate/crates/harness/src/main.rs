use clap::Parser;

fn main() -> anyhow::Result<()> {
    edgecache_harness::cli::run(edgecache_harness::cli::Cli::parse())
}
