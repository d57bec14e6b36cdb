//! Plain-text model dump. Floats are written in shortest round-trip form, so
//! reloading is bit-exact.
//!
//! ```text
//! lstm-model v1
//! input_dim 5
//! hidden_dim 4
//! mean <F floats>
//! scale <F floats>
//! params <P floats>
//! ```

use std::io::{BufRead, BufReader, Read, Write};

use super::lstm::{LstmModel, Scaler};
use crate::{Error, Result};

const MAGIC: &str = "lstm-model v1";

fn write_floats<W: Write>(w: &mut W, key: &str, vals: &[f64]) -> std::io::Result<()> {
    write!(w, "{key}")?;
    for v in vals {
        write!(w, " {v:e}")?;
    }
    writeln!(w)
}

pub fn write_model<W: Write>(model: &LstmModel, mut w: W) -> Result<()> {
    writeln!(w, "{MAGIC}")?;
    writeln!(w, "input_dim {}", model.input_dim())?;
    writeln!(w, "hidden_dim {}", model.hidden_dim())?;
    write_floats(&mut w, "mean", &model.scaler.mean)?;
    write_floats(&mut w, "scale", &model.scaler.scale)?;
    write_floats(&mut w, "params", model.params())?;
    w.flush()?;
    Ok(())
}

pub fn read_model<R: Read>(r: R) -> Result<LstmModel> {
    let mut lines = BufReader::new(r).lines();
    let mut lineno = 0u64;
    let mut next = |expect: &str| -> Result<(u64, String)> {
        lineno += 1;
        let line = lines
            .next()
            .ok_or_else(|| Error::parse(lineno, format!("unexpected end of file, expected `{expect}`")))??;
        Ok((lineno, line))
    };
    let (n, magic) = next(MAGIC)?;
    if magic.trim() != MAGIC {
        return Err(Error::parse(n, format!("expected `{MAGIC}`")));
    }
    let field = |(n, line): (u64, String), key: &str| -> Result<(u64, String)> {
        line.strip_prefix(key)
            .map(|rest| (n, rest.trim().to_string()))
            .ok_or_else(|| Error::parse(n, format!("expected `{key}`")))
    };
    let dim = |(n, v): (u64, String)| -> Result<usize> {
        v.parse().map_err(|e| Error::parse(n, format!("bad dimension: {e}")))
    };
    let floats = |(n, v): (u64, String)| -> Result<Vec<f64>> {
        v.split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|e| Error::parse(n, format!("bad float `{t}`: {e}")))
            })
            .collect()
    };
    let input_dim = dim(field(next("input_dim")?, "input_dim")?)?;
    let hidden_dim = dim(field(next("hidden_dim")?, "hidden_dim")?)?;
    let mean = floats(field(next("mean")?, "mean")?)?;
    let scale = floats(field(next("scale")?, "scale")?)?;
    let params = floats(field(next("params")?, "params")?)?;
    LstmModel::from_parts(input_dim, hidden_dim, params, Scaler { mean, scale })
}
