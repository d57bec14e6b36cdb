//! The user-content request tensor `n_{u,f}(t)` and its CSV persistence.
//!
//! File layout:
//!
//! ```text
//! #T=250,U=45,F=225,seed=42
//! #start=0
//! #<free-form reproducibility lines>
//! t,user,content,count
//! 0,0,17,3
//! ```
//!
//! Only nonzero counts are written. `t` is the absolute slot index, so a
//! forecast covering slots `N..N+N_opt` carries `#start=N`.

use std::io::{Read, Write};

use serde::Deserialize;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RequestMatrix {
    start_slot: usize,
    slots: usize,
    users: usize,
    contents: usize,
    counts: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlotTotals {
    pub per_user: Vec<u64>,
    pub per_content: Vec<u64>,
    pub total: u64,
}

impl RequestMatrix {
    pub fn zeros(slots: usize, users: usize, contents: usize) -> Self {
        Self {
            start_slot: 0,
            slots,
            users,
            contents,
            counts: vec![0; slots * users * contents],
        }
    }

    /// Builds from nested `[slot][user][content]` rows.
    pub fn from_nested(rows: &[Vec<Vec<u32>>]) -> Result<Self> {
        let slots = rows.len();
        let users = rows.first().map_or(0, |s| s.len());
        let contents = rows.first().and_then(|s| s.first()).map_or(0, |r| r.len());
        let mut m = Self::zeros(slots, users, contents);
        for (t, slot) in rows.iter().enumerate() {
            if slot.len() != users {
                return Err(Error::Dimension(format!(
                    "slot {t} has {} users, expected {users}",
                    slot.len()
                )));
            }
            for (u, row) in slot.iter().enumerate() {
                if row.len() != contents {
                    return Err(Error::Dimension(format!(
                        "slot {t} user {u} has {} contents, expected {contents}",
                        row.len()
                    )));
                }
                m.slot_mut(t)[u * contents..(u + 1) * contents].copy_from_slice(row);
            }
        }
        Ok(m)
    }

    pub fn with_start_slot(mut self, start: usize) -> Self {
        self.start_slot = start;
        self
    }

    pub fn start_slot(&self) -> usize {
        self.start_slot
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn contents(&self) -> usize {
        self.contents
    }

    #[inline]
    fn offset(&self, t: usize, user: usize, content: usize) -> usize {
        (t * self.users + user) * self.contents + content
    }

    pub fn get(&self, t: usize, user: usize, content: usize) -> u32 {
        self.counts[self.offset(t, user, content)]
    }

    pub fn set(&mut self, t: usize, user: usize, content: usize, value: u32) {
        let o = self.offset(t, user, content);
        self.counts[o] = value;
    }

    /// Row-major `U x F` block of slot `t` (local index).
    pub fn slot(&self, t: usize) -> &[u32] {
        let n = self.users * self.contents;
        &self.counts[t * n..(t + 1) * n]
    }

    pub fn slot_mut(&mut self, t: usize) -> &mut [u32] {
        let n = self.users * self.contents;
        &mut self.counts[t * n..(t + 1) * n]
    }

    pub fn row(&self, t: usize, user: usize) -> &[u32] {
        let o = self.offset(t, user, 0);
        &self.counts[o..o + self.contents]
    }

    pub fn row_mut(&mut self, t: usize, user: usize) -> &mut [u32] {
        let o = self.offset(t, user, 0);
        &mut self.counts[o..o + self.contents]
    }

    /// One user's history as a `slots x contents` series.
    pub fn user_series(&self, user: usize) -> Vec<Vec<f64>> {
        (0..self.slots)
            .map(|t| self.row(t, user).iter().map(|&c| c as f64).collect())
            .collect()
    }

    /// Local slot range `[from, to)` as a new matrix; the start slot shifts
    /// accordingly.
    pub fn slice_slots(&self, from: usize, to: usize) -> Result<RequestMatrix> {
        if from > to || to > self.slots {
            return Err(Error::SlotOutOfRange {
                slot: to,
                slots: self.slots,
            });
        }
        let n = self.users * self.contents;
        Ok(RequestMatrix {
            start_slot: self.start_slot + from,
            slots: to - from,
            users: self.users,
            contents: self.contents,
            counts: self.counts[from * n..to * n].to_vec(),
        })
    }

    /// Per-content totals summed over every slot.
    pub fn content_totals(&self) -> Vec<u64> {
        let mut totals = vec![0u64; self.contents];
        for chunk in self.counts.chunks_exact(self.contents.max(1)) {
            for (acc, &c) in totals.iter_mut().zip(chunk) {
                *acc += c as u64;
            }
        }
        totals
    }

    pub fn slot_totals(&self, t: usize) -> Result<SlotTotals> {
        if t >= self.slots {
            return Err(Error::SlotOutOfRange {
                slot: t,
                slots: self.slots,
            });
        }
        let mut per_user = vec![0u64; self.users];
        let mut per_content = vec![0u64; self.contents];
        for (u, acc) in per_user.iter_mut().enumerate() {
            for (k, &c) in self.row(t, u).iter().enumerate() {
                *acc += c as u64;
                per_content[k] += c as u64;
            }
        }
        let total = per_user.iter().sum();
        Ok(SlotTotals {
            per_user,
            per_content,
            total,
        })
    }

    pub fn write_csv<W: Write>(&self, mut w: W, seed: u64, comments: &[String]) -> Result<()> {
        writeln!(
            w,
            "#T={},U={},F={},seed={}",
            self.slots, self.users, self.contents, seed
        )?;
        if self.start_slot != 0 {
            writeln!(w, "#start={}", self.start_slot)?;
        }
        for c in comments {
            for line in c.lines() {
                writeln!(w, "#{line}")?;
            }
        }
        writeln!(w, "t,user,content,count")?;
        for t in 0..self.slots {
            for u in 0..self.users {
                for (k, &c) in self.row(t, u).iter().enumerate() {
                    if c != 0 {
                        writeln!(w, "{},{},{},{}", self.start_slot + t, u, k, c)?;
                    }
                }
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(mut r: R) -> Result<(RequestMatrix, CsvMeta)> {
        let mut text = String::new();
        r.read_to_string(&mut text)?;

        let mut dims: Option<(usize, usize, usize, u64)> = None;
        let mut start = 0usize;
        let mut comments = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let lineno = i as u64 + 1;
            let Some(body) = line.strip_prefix('#') else {
                break;
            };
            if body.starts_with("T=") {
                dims = Some(parse_dims(body).map_err(|m| Error::parse(lineno, m))?);
            } else if let Some(v) = body.strip_prefix("start=") {
                start = v
                    .trim()
                    .parse()
                    .map_err(|e| Error::parse(lineno, format!("bad start slot: {e}")))?;
            } else {
                comments.push(body.to_string());
            }
        }
        let (slots, users, contents, seed) =
            dims.ok_or_else(|| Error::parse(1, "missing `#T=..,U=..,F=..,seed=..` metadata line"))?;

        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .has_headers(true)
            .from_reader(text.as_bytes());
        let headers = reader
            .headers()
            .map_err(|e| csv_error(&e, "unreadable header"))?
            .clone();
        if headers.iter().collect::<Vec<_>>() != ["t", "user", "content", "count"] {
            let line = headers.position().map_or(0, |p| p.line());
            return Err(Error::parse(line, "expected header `t,user,content,count`"));
        }

        let mut m = RequestMatrix::zeros(slots, users, contents).with_start_slot(start);
        let mut seen = vec![false; m.counts.len()];
        for rec in reader.records() {
            let rec = rec.map_err(|e| csv_error(&e, "malformed row"))?;
            let line = rec.position().map_or(0, |p| p.line());
            let e: Entry = rec
                .deserialize(Some(&headers))
                .map_err(|e| Error::parse(line, format!("malformed row: {e}")))?;
            if e.t < start || e.t >= start + slots || e.user >= users || e.content >= contents {
                return Err(Error::parse(
                    line,
                    format!("entry ({},{},{}) outside declared dimensions", e.t, e.user, e.content),
                ));
            }
            let o = m.offset(e.t - start, e.user, e.content);
            if seen[o] {
                return Err(Error::parse(
                    line,
                    format!("duplicate entry ({},{},{})", e.t, e.user, e.content),
                ));
            }
            seen[o] = true;
            m.counts[o] = e.count;
        }
        Ok((m, CsvMeta { seed, comments }))
    }
}

/// Metadata recovered from a request CSV.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvMeta {
    pub seed: u64,
    pub comments: Vec<String>,
}

#[derive(Debug, Deserialize)]
struct Entry {
    t: usize,
    user: usize,
    content: usize,
    count: u32,
}

fn csv_error(e: &csv::Error, what: &str) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    Error::parse(line, format!("{what}: {e}"))
}

fn parse_dims(body: &str) -> std::result::Result<(usize, usize, usize, u64), String> {
    let mut t = None;
    let mut u = None;
    let mut f = None;
    let mut seed = None;
    for kv in body.split(',') {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| format!("metadata field `{kv}` is not key=value"))?;
        let v = v.trim();
        match k.trim() {
            "T" => t = Some(v.parse().map_err(|e| format!("T: {e}"))?),
            "U" => u = Some(v.parse().map_err(|e| format!("U: {e}"))?),
            "F" => f = Some(v.parse().map_err(|e| format!("F: {e}"))?),
            "seed" => seed = Some(v.parse().map_err(|e| format!("seed: {e}"))?),
            other => return Err(format!("unknown metadata key `{other}`")),
        }
    }
    Ok((
        t.ok_or("missing T")?,
        u.ok_or("missing U")?,
        f.ok_or("missing F")?,
        seed.ok_or("missing seed")?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totals_of_empty_slot() {
        let m = RequestMatrix::zeros(1, 3, 4);
        let s = m.slot_totals(0).unwrap();
        assert_eq!(s.per_user, vec![0; 3]);
        assert_eq!(s.per_content, vec![0; 4]);
        assert_eq!(s.total, 0);
    }

    #[test]
    fn totals_of_two_by_two() {
        let m = RequestMatrix::from_nested(&[vec![vec![1, 2], vec![3, 4]]]).unwrap();
        let s = m.slot_totals(0).unwrap();
        assert_eq!(s.per_user, vec![3, 7]);
        assert_eq!(s.per_content, vec![4, 6]);
        assert_eq!(s.total, 10);
    }

    #[test]
    fn totals_of_single_entry() {
        let m = RequestMatrix::from_nested(&[vec![vec![5]]]).unwrap();
        let s = m.slot_totals(0).unwrap();
        assert_eq!((s.per_user, s.per_content, s.total), (vec![5], vec![5], 5));
    }

    #[test]
    fn totals_out_of_range() {
        let m = RequestMatrix::zeros(2, 1, 1);
        assert!(matches!(
            m.slot_totals(2),
            Err(Error::SlotOutOfRange { slot: 2, slots: 2 })
        ));
    }

    #[test]
    fn csv_round_trip_with_offset() {
        let mut m = RequestMatrix::zeros(3, 2, 4).with_start_slot(10);
        m.set(0, 1, 3, 7);
        m.set(2, 0, 0, 1);
        let mut buf = Vec::new();
        m.write_csv(&mut buf, 99, &["gen gamma_min=0.5".to_string()]).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("#T=3,U=2,F=4,seed=99\n#start=10\n#gen gamma_min=0.5\nt,user,content,count\n"));
        let (back, meta) = RequestMatrix::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, m);
        assert_eq!(meta.seed, 99);
        assert_eq!(meta.comments, vec!["gen gamma_min=0.5".to_string()]);
    }

    #[test]
    fn truncated_row_names_its_line() {
        let text = "#T=2,U=1,F=2,seed=0\nt,user,content,count\n0,0,1,4\n1,0,";
        match RequestMatrix::read_csv(text.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn out_of_range_entry_is_rejected() {
        let text = "#T=1,U=1,F=2,seed=0\nt,user,content,count\n0,0,5,1\n";
        match RequestMatrix::read_csv(text.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn missing_metadata_is_rejected() {
        let text = "t,user,content,count\n0,0,0,1\n";
        assert!(matches!(
            RequestMatrix::read_csv(text.as_bytes()),
            Err(Error::Parse { .. })
        ));
    }
}
