//! Greedy per-slot placement heuristics.
//!
//! Every scheme turns the predicted joint preferences of each optimisation
//! slot into binary caching indicators; averaging the indicators over the
//! horizon gives the long-term caching probabilities fed to the cost model.
//!
//! Ranking conventions shared by all schemes: a user's preferred contents are
//! those with positive predicted joint preference, sorted descending with
//! ties broken by ascending content index; users claim contents in ascending
//! index order; cell and cluster popularity are sums of joint preferences.

use std::fmt;
use std::io::{BufRead, BufReader, Read, Write};
use std::str::FromStr;

use crate::cachemodel::{average_cost_het, average_cost_hom, CostParams, HetPlacement, HomPlacement};
use crate::preference::{AggregatedPreference, PreferenceProfile};
use crate::{Error, RequestMatrix, Result, Topology};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeId {
    BsFirst,
    UserFirst,
    Overlapping,
    Homogeneous,
    StaticZipf,
}

impl SchemeId {
    pub const ALL: [SchemeId; 5] = [
        SchemeId::BsFirst,
        SchemeId::UserFirst,
        SchemeId::Overlapping,
        SchemeId::Homogeneous,
        SchemeId::StaticZipf,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SchemeId::BsFirst => "bs-first",
            SchemeId::UserFirst => "user-first",
            SchemeId::Overlapping => "overlapping",
            SchemeId::Homogeneous => "homogeneous",
            SchemeId::StaticZipf => "static-zipf",
        }
    }

    /// Schemes that never store a content at two nodes of the cluster in the
    /// same slot. The static baseline only keeps its tiers disjoint.
    pub fn is_non_overlapping(self) -> bool {
        matches!(self, SchemeId::BsFirst | SchemeId::UserFirst)
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown scheme `{s}`")))
    }
}

/// Binary indicators per optimisation slot, stored flat as `[t][node][k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndicatorSchedule {
    slots: usize,
    users: usize,
    bs: usize,
    contents: usize,
    user_ind: Vec<bool>,
    bs_ind: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeType {
    User,
    Bs,
}

impl IndicatorSchedule {
    pub fn empty(slots: usize, users: usize, bs: usize, contents: usize) -> Self {
        Self {
            slots,
            users,
            bs,
            contents,
            user_ind: vec![false; slots * users * contents],
            bs_ind: vec![false; slots * bs * contents],
        }
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn num_bs(&self) -> usize {
        self.bs
    }

    pub fn contents(&self) -> usize {
        self.contents
    }

    pub fn user_row(&self, t: usize, user: usize) -> &[bool] {
        let at = (t * self.users + user) * self.contents;
        &self.user_ind[at..at + self.contents]
    }

    pub fn bs_row(&self, t: usize, bs: usize) -> &[bool] {
        let at = (t * self.bs + bs) * self.contents;
        &self.bs_ind[at..at + self.contents]
    }

    fn user_row_mut(&mut self, t: usize, user: usize) -> &mut [bool] {
        let at = (t * self.users + user) * self.contents;
        &mut self.user_ind[at..at + self.contents]
    }

    fn bs_row_mut(&mut self, t: usize, bs: usize) -> &mut [bool] {
        let at = (t * self.bs + bs) * self.contents;
        &mut self.bs_ind[at..at + self.contents]
    }

    pub fn set(&mut self, t: usize, node: NodeType, id: usize, content: usize, on: bool) {
        match node {
            NodeType::User => self.user_row_mut(t, id)[content] = on,
            NodeType::Bs => self.bs_row_mut(t, id)[content] = on,
        }
    }

    fn check_topology(&self, topo: &Topology) -> Result<()> {
        if self.users != topo.num_users() || self.bs != topo.num_bs() || self.contents != topo.num_contents() {
            return Err(Error::Dimension(format!(
                "schedule is {}x{}x{}, topology {}x{}x{}",
                self.users,
                self.bs,
                self.contents,
                topo.num_users(),
                topo.num_bs(),
                topo.num_contents()
            )));
        }
        Ok(())
    }

    /// Per-slot capacity check for every node.
    pub fn check_capacity(&self, topo: &Topology) -> Result<()> {
        self.check_topology(topo)?;
        for t in 0..self.slots {
            for u in 0..self.users {
                let n = self.user_row(t, u).iter().filter(|&&b| b).count();
                if n > topo.user_capacity() {
                    return Err(Error::Infeasible(format!(
                        "slot {t}: user {u} stores {n} > {}",
                        topo.user_capacity()
                    )));
                }
            }
            for j in 0..self.bs {
                let n = self.bs_row(t, j).iter().filter(|&&b| b).count();
                if n > topo.bs_capacity() {
                    return Err(Error::Infeasible(format!(
                        "slot {t}: BS {j} stores {n} > {}",
                        topo.bs_capacity()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Each content stored at most once across all nodes in every slot.
    pub fn check_unique(&self) -> Result<()> {
        for t in 0..self.slots {
            let mut seen = vec![false; self.contents];
            let rows = (0..self.users)
                .map(|u| self.user_row(t, u))
                .chain((0..self.bs).map(|j| self.bs_row(t, j)));
            for row in rows {
                for (k, _) in row.iter().enumerate().filter(|(_, &b)| b) {
                    if std::mem::replace(&mut seen[k], true) {
                        return Err(Error::Infeasible(format!("slot {t}: content {k} stored twice")));
                    }
                }
            }
        }
        Ok(())
    }

    /// No content held by both a user and a BS in the same slot.
    pub fn check_tier_disjoint(&self) -> Result<()> {
        for t in 0..self.slots {
            for k in 0..self.contents {
                let at_user = (0..self.users).any(|u| self.user_row(t, u)[k]);
                let at_bs = (0..self.bs).any(|j| self.bs_row(t, j)[k]);
                if at_user && at_bs {
                    return Err(Error::Infeasible(format!("slot {t}: content {k} at both tiers")));
                }
            }
        }
        Ok(())
    }

    /// Identical rows for all users of each cell and for all BSs, per slot.
    pub fn check_tier_uniform(&self, topo: &Topology) -> Result<()> {
        self.check_topology(topo)?;
        for t in 0..self.slots {
            for c in 0..self.bs {
                let mut cell = topo.cell_users(c);
                if let Some(first) = cell.next() {
                    if let Some(u) = cell.find(|&u| self.user_row(t, u) != self.user_row(t, first)) {
                        return Err(Error::Infeasible(format!(
                            "slot {t}: user {u} differs from user {first}"
                        )));
                    }
                }
            }
            if let Some(j) = (1..self.bs).find(|&j| self.bs_row(t, j) != self.bs_row(t, 0)) {
                return Err(Error::Infeasible(format!("slot {t}: BS {j} differs from BS 0")));
            }
        }
        Ok(())
    }

    /// CSV with one `t,node_type,node_id,content` row per stored item.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut w = std::io::BufWriter::new(w);
        writeln!(
            w,
            "#slots={},users={},bs={},contents={}",
            self.slots, self.users, self.bs, self.contents
        )?;
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["t", "node_type", "node_id", "content"])
            .map_err(csv_err)?;
        for t in 0..self.slots {
            for u in 0..self.users {
                for (k, _) in self.user_row(t, u).iter().enumerate().filter(|(_, &b)| b) {
                    out.serialize((t, "user", u, k)).map_err(csv_err)?;
                }
            }
            for j in 0..self.bs {
                for (k, _) in self.bs_row(t, j).iter().enumerate().filter(|(_, &b)| b) {
                    out.serialize((t, "bs", j, k)).map_err(csv_err)?;
                }
            }
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut reader = BufReader::new(r);
        let mut first = String::new();
        reader.read_line(&mut first)?;
        let dims = first
            .trim()
            .strip_prefix('#')
            .ok_or_else(|| Error::parse(1, "missing `#slots=..` metadata line"))?;
        let get = |key: &str| -> Result<usize> {
            dims.split(',')
                .find_map(|kv| kv.trim().strip_prefix(key).and_then(|v| v.strip_prefix('=')))
                .ok_or_else(|| Error::parse(1, format!("metadata lacks `{key}`")))?
                .parse()
                .map_err(|e| Error::parse(1, format!("bad `{key}`: {e}")))
        };
        let (slots, users, bs, contents) = (get("slots")?, get("users")?, get("bs")?, get("contents")?);
        let mut sched = Self::empty(slots, users, bs, contents);
        let mut csv_reader = csv::Reader::from_reader(reader);
        for rec in csv_reader.records() {
            let rec = rec.map_err(csv_err)?;
            // Line numbers from the csv reader exclude the metadata line.
            let line = rec.position().map_or(0, |p| p.line() + 1);
            let (t, kind, id, k): (usize, String, usize, usize) =
                rec.deserialize(None).map_err(|e| Error::parse(line, e.to_string()))?;
            let (node, limit) = match kind.as_str() {
                "user" => (NodeType::User, users),
                "bs" => (NodeType::Bs, bs),
                other => return Err(Error::parse(line, format!("unknown node type `{other}`"))),
            };
            if t >= slots || id >= limit || k >= contents {
                return Err(Error::parse(line, "index out of range"));
            }
            sched.set(t, node, id, k, true);
        }
        Ok(sched)
    }
}

fn csv_err(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    Error::parse(line, e.to_string())
}

/// Long-term probabilities, homogeneous when the averaged rows coincide
/// within each tier.
#[derive(Debug, Clone, PartialEq)]
pub enum Placement {
    Het(HetPlacement),
    Hom(HomPlacement),
}

impl Placement {
    pub fn to_het(&self, topo: &Topology) -> HetPlacement {
        match self {
            Placement::Het(p) => p.clone(),
            Placement::Hom(p) => HetPlacement::from_hom(p, topo),
        }
    }

    pub fn cost(&self, rho: &AggregatedPreference, topo: &Topology, costs: &CostParams) -> Result<f64> {
        match self {
            Placement::Het(p) => average_cost_het(p, rho, topo, costs),
            Placement::Hom(p) => average_cost_hom(p, rho, topo, costs),
        }
    }
}

/// Averages indicators over the horizon: `a = sum_t I / N_opt`.
///
/// A tier-uniform schedule (identical user rows within each cell and
/// identical BS rows, every slot) becomes a [`HomPlacement`] whose user
/// probabilities are additionally averaged over all users of the cluster.
pub fn indicators_to_probabilities(sched: &IndicatorSchedule, topo: &Topology) -> Result<Placement> {
    sched.check_topology(topo)?;
    if sched.slots == 0 {
        return Err(Error::InvalidParameter("schedule has no slots".into()));
    }
    let average = |rows: &mut dyn Iterator<Item = &[bool]>| -> Vec<f64> {
        let mut counts = vec![0u32; sched.contents];
        let mut n = 0u32;
        for row in rows {
            n += 1;
            for (c, &b) in counts.iter_mut().zip(row) {
                *c += b as u32;
            }
        }
        counts.into_iter().map(|c| c as f64 / n as f64).collect()
    };
    let slots = 0..sched.slots;
    if sched.check_tier_uniform(topo).is_ok() {
        let user_probs = average(
            &mut slots
                .clone()
                .flat_map(|t| (0..sched.users).map(move |u| sched.user_row(t, u))),
        );
        let bs_probs = average(&mut slots.clone().map(|t| sched.bs_row(t, 0)));
        return Ok(Placement::Hom(HomPlacement::new(user_probs, bs_probs, topo)?));
    }
    let user_probs: Vec<Vec<f64>> = (0..sched.users)
        .map(|u| average(&mut slots.clone().map(|t| sched.user_row(t, u))))
        .collect();
    let bs_probs: Vec<Vec<f64>> = (0..sched.bs)
        .map(|j| average(&mut slots.clone().map(|t| sched.bs_row(t, j))))
        .collect();
    Ok(Placement::Het(HetPlacement::new(user_probs, bs_probs, topo)?))
}

fn check_pred(pred: &[PreferenceProfile], topo: &Topology) -> Result<()> {
    if let Some(p) = pred
        .iter()
        .find(|p| p.users() != topo.num_users() || p.contents() != topo.num_contents())
    {
        return Err(Error::Dimension(format!(
            "prediction for slot {} is {}x{}, topology {}x{}",
            p.slot,
            p.users(),
            p.contents(),
            topo.num_users(),
            topo.num_contents()
        )));
    }
    Ok(())
}

/// Contents sorted by descending score, ties by ascending index.
fn rank_by(score: &[f64], candidates: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut v: Vec<usize> = candidates.into_iter().collect();
    v.sort_by(|&a, &b| score[b].total_cmp(&score[a]).then(a.cmp(&b)));
    v
}

/// A user's preferred contents: positive joint preference, ranked.
fn preferred(joint_row: &[f64]) -> Vec<usize> {
    rank_by(joint_row, (0..joint_row.len()).filter(|&k| joint_row[k] > 0.0))
}

/// Popularity of each content summed over the given users.
fn popularity(joint: &[Vec<f64>], users: impl IntoIterator<Item = usize>) -> Vec<f64> {
    let f = joint.first().map_or(0, |r| r.len());
    let mut omega = vec![0.0; f];
    for u in users {
        for (o, q) in omega.iter_mut().zip(&joint[u]) {
            *o += q;
        }
    }
    omega
}

struct SlotState<'a> {
    topo: &'a Topology,
    t: usize,
    stored: Vec<bool>,
    user_free: Vec<usize>,
    bs_free: Vec<usize>,
}

impl<'a> SlotState<'a> {
    fn new(topo: &'a Topology, t: usize) -> Self {
        Self {
            topo,
            t,
            stored: vec![false; topo.num_contents()],
            user_free: vec![topo.user_capacity(); topo.num_users()],
            bs_free: vec![topo.bs_capacity(); topo.num_bs()],
        }
    }

    /// Claims each not-yet-stored candidate for the node until it is full.
    fn claim(&mut self, sched: &mut IndicatorSchedule, node: NodeType, id: usize, candidates: &[usize]) {
        let free = match node {
            NodeType::User => &mut self.user_free[id],
            NodeType::Bs => &mut self.bs_free[id],
        };
        for &k in candidates {
            if *free == 0 {
                break;
            }
            if !self.stored[k] {
                self.stored[k] = true;
                *free -= 1;
                sched.set(self.t, node, id, k, true);
            }
        }
    }

    fn claim_users(&mut self, sched: &mut IndicatorSchedule, joint: &[Vec<f64>], users: std::ops::Range<usize>) {
        for u in users {
            self.claim(sched, NodeType::User, u, &preferred(&joint[u]));
        }
    }

    /// Fills BS `c` with its cell's still-unstored preferred contents.
    fn fill_bs_from_cell(&mut self, sched: &mut IndicatorSchedule, joint: &[Vec<f64>], c: usize) {
        let users = self.topo.cell_users(c);
        let omega = popularity(joint, users.clone());
        let candidates = rank_by(&omega, (0..omega.len()).filter(|&k| omega[k] > 0.0));
        self.claim(sched, NodeType::Bs, c, &candidates);
    }
}

/// Base-station-first non-overlapping greedy placement.
///
/// BSs are first filled with contents preferred in every cell, then with
/// contents shared by the cell and at least one other cell, both ranked by
/// cluster popularity. Then, cell by cell, users claim their own preferred
/// contents and the cell's BS takes the cell's remaining preferred contents.
pub fn greedy_bs_first(pred: &[PreferenceProfile], topo: &Topology) -> Result<IndicatorSchedule> {
    check_pred(pred, topo)?;
    let (b, f) = (topo.num_bs(), topo.num_contents());
    let mut sched = IndicatorSchedule::empty(pred.len(), topo.num_users(), b, f);
    for (t, profile) in pred.iter().enumerate() {
        let joint = &profile.joint;
        let mut state = SlotState::new(topo, t);
        let cell_omega: Vec<Vec<f64>> = (0..b).map(|c| popularity(joint, topo.cell_users(c))).collect();
        let cluster_omega = popularity(joint, 0..topo.num_users());
        let cells_preferring = |k: usize| cell_omega.iter().filter(|o| o[k] > 0.0).count();

        let common_all = rank_by(&cluster_omega, (0..f).filter(|&k| cells_preferring(k) == b));
        for c in 0..b {
            let shared = rank_by(
                &cluster_omega,
                (0..f).filter(|&k| cell_omega[c][k] > 0.0 && (2..b).contains(&cells_preferring(k))),
            );
            let candidates: Vec<usize> = common_all.iter().chain(&shared).copied().collect();
            state.claim(&mut sched, NodeType::Bs, c, &candidates);
        }
        for c in 0..b {
            state.claim_users(&mut sched, joint, topo.cell_users(c));
            state.fill_bs_from_cell(&mut sched, joint, c);
        }
    }
    Ok(sched)
}

/// User-first non-overlapping greedy placement: every user claims its own
/// preferred contents, then each BS takes its cell's most popular residuals.
pub fn greedy_user_first(pred: &[PreferenceProfile], topo: &Topology) -> Result<IndicatorSchedule> {
    check_pred(pred, topo)?;
    let b = topo.num_bs();
    let mut sched = IndicatorSchedule::empty(pred.len(), topo.num_users(), b, topo.num_contents());
    for (t, profile) in pred.iter().enumerate() {
        let mut state = SlotState::new(topo, t);
        state.claim_users(&mut sched, &profile.joint, 0..topo.num_users());
        for c in 0..b {
            state.fill_bs_from_cell(&mut sched, &profile.joint, c);
        }
    }
    Ok(sched)
}

/// Overlapping greedy placement, cell by cell.
///
/// Each user stores its own top preferred contents. Preferred contents that
/// did not fit are pooled and ranked by cell popularity; users with spare
/// room take pooled contents they do not already hold. Whatever is still
/// pooled goes to the BS, and any free room (user or BS) is padded with the
/// cell's most popular contents not yet held by that node.
pub fn greedy_overlapping(pred: &[PreferenceProfile], topo: &Topology) -> Result<IndicatorSchedule> {
    check_pred(pred, topo)?;
    let (b, f, cd, cb) = (
        topo.num_bs(),
        topo.num_contents(),
        topo.user_capacity(),
        topo.bs_capacity(),
    );
    let mut sched = IndicatorSchedule::empty(pred.len(), topo.num_users(), b, f);
    for (t, profile) in pred.iter().enumerate() {
        let joint = &profile.joint;
        for c in 0..b {
            let users = topo.cell_users(c);
            let omega = popularity(joint, users.clone());
            let cell_rank = rank_by(&omega, 0..f);

            let mut held: Vec<Vec<bool>> = Vec::with_capacity(users.len());
            let mut in_rest = vec![false; f];
            for u in users.clone() {
                let pref = preferred(&joint[u]);
                let mut mine = vec![false; f];
                for &k in pref.iter().take(cd) {
                    mine[k] = true;
                }
                for &k in pref.iter().skip(cd) {
                    in_rest[k] = true;
                }
                held.push(mine);
            }
            let mut rest = rank_by(&omega, (0..f).filter(|&k| in_rest[k]));
            let spare: usize = held.iter().map(|h| cd - h.iter().filter(|&&x| x).count()).sum();
            let rest_exceeds_spare = rest.len() > spare;

            for h in held.iter_mut() {
                let mut free = cd - h.iter().filter(|&&x| x).count();
                rest.retain(|&k| {
                    if free > 0 && !h[k] {
                        h[k] = true;
                        free -= 1;
                        false
                    } else {
                        true
                    }
                });
                if !rest_exceeds_spare {
                    for &k in &cell_rank {
                        if free == 0 {
                            break;
                        }
                        if !h[k] {
                            h[k] = true;
                            free -= 1;
                        }
                    }
                }
            }
            for (u, h) in users.clone().zip(&held) {
                sched.user_row_mut(t, u).copy_from_slice(h);
            }

            let row = sched.bs_row_mut(t, c);
            let mut free = cb;
            for &k in rest.iter().chain(&cell_rank) {
                if free == 0 {
                    break;
                }
                if !row[k] {
                    row[k] = true;
                    free -= 1;
                }
            }
        }
    }
    Ok(sched)
}

/// Homogeneous greedy placement: all users of a cell store the cell's top
/// contents; all BSs store the top cluster-ranked residuals.
pub fn homogeneous_greedy(pred: &[PreferenceProfile], topo: &Topology) -> Result<IndicatorSchedule> {
    check_pred(pred, topo)?;
    let (b, f, cd, cb) = (
        topo.num_bs(),
        topo.num_contents(),
        topo.user_capacity(),
        topo.bs_capacity(),
    );
    let mut sched = IndicatorSchedule::empty(pred.len(), topo.num_users(), b, f);
    for (t, profile) in pred.iter().enumerate() {
        let joint = &profile.joint;
        let mut residual = vec![false; f];
        for c in 0..b {
            let users = topo.cell_users(c);
            let ranked = rank_by(&popularity(joint, users.clone()), 0..f);
            let mut row = vec![false; f];
            for &k in ranked.iter().take(cd) {
                row[k] = true;
            }
            for &k in ranked.iter().skip(cd) {
                residual[k] = true;
            }
            for u in users {
                sched.user_row_mut(t, u).copy_from_slice(&row);
            }
        }
        let cluster = popularity(joint, 0..topo.num_users());
        let residual = rank_by(&cluster, (0..f).filter(|&k| residual[k]));
        let mut row = vec![false; f];
        let mut free = cb;
        for k in residual.into_iter().chain(rank_by(&cluster, 0..f)) {
            if free == 0 {
                break;
            }
            if !row[k] {
                row[k] = true;
                free -= 1;
            }
        }
        for j in 0..b {
            sched.bs_row_mut(t, j).copy_from_slice(&row);
        }
    }
    Ok(sched)
}

/// Slot-invariant popularity-threshold placement from historical totals:
/// users store ranks `0..C_d`, BSs ranks `C_d..C_d + C_b`.
pub fn static_zipf_baseline(history: &RequestMatrix, topo: &Topology, horizon: usize) -> Result<IndicatorSchedule> {
    if history.slots() == 0 {
        return Err(Error::InvalidParameter(
            "static baseline needs a non-empty history".into(),
        ));
    }
    if history.contents() != topo.num_contents() {
        return Err(Error::Dimension(format!(
            "history has {} contents, topology {}",
            history.contents(),
            topo.num_contents()
        )));
    }
    let totals: Vec<f64> = history.content_totals().into_iter().map(|n| n as f64).collect();
    let ranked = rank_by(&totals, 0..topo.num_contents());
    let cd = topo.user_capacity().min(ranked.len());
    let user_set = &ranked[..cd];
    let bs_set = &ranked[cd..(cd + topo.bs_capacity()).min(ranked.len())];
    let mut sched = IndicatorSchedule::empty(horizon, topo.num_users(), topo.num_bs(), topo.num_contents());
    for t in 0..horizon {
        for u in 0..topo.num_users() {
            for &k in user_set {
                sched.set(t, NodeType::User, u, k, true);
            }
        }
        for j in 0..topo.num_bs() {
            for &k in bs_set {
                sched.set(t, NodeType::Bs, j, k, true);
            }
        }
    }
    Ok(sched)
}

/// Runs `scheme`. `history` is only consulted by the static baseline.
pub fn build_schedule(
    scheme: SchemeId,
    pred: &[PreferenceProfile],
    history: &RequestMatrix,
    topo: &Topology,
) -> Result<IndicatorSchedule> {
    match scheme {
        SchemeId::BsFirst => greedy_bs_first(pred, topo),
        SchemeId::UserFirst => greedy_user_first(pred, topo),
        SchemeId::Overlapping => greedy_overlapping(pred, topo),
        SchemeId::Homogeneous => homogeneous_greedy(pred, topo),
        SchemeId::StaticZipf => static_zipf_baseline(history, topo, pred.len()),
    }
}
