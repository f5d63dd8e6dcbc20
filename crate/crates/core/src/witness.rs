//! Cycle witnesses: a start vertex plus a label word, checked by direct replay.
//!
//! Witness files hold one JSON object per line:
//! `{"m":3,"n":2,"directed":false,"length":3,"start":"1^0 2^0","word":["f1","f1","f1"]}`.

use std::collections::HashSet;
use std::fmt;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::GraphParams;
use crate::group::{EdgeLabel, GenPerm};

/// Smallest cycle length considered.
pub const MIN_CYCLE_LENGTH: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleWitness {
    pub params: GraphParams,
    pub start: GenPerm,
    pub word: Vec<EdgeLabel>,
}

/// First reason a witness fails to describe a simple cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessViolation {
    ShapeMismatch,
    TooShort { length: usize },
    IllegalLabel { position: usize, label: EdgeLabel },
    RepeatedVertex { position: usize, first_seen: usize },
    NotClosed,
}

impl fmt::Display for WitnessViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessViolation::ShapeMismatch => write!(f, "start vertex does not match graph shape"),
            WitnessViolation::TooShort { length } => {
                write!(f, "length {length} below minimum {MIN_CYCLE_LENGTH}")
            }
            WitnessViolation::IllegalLabel { position, label } => {
                write!(f, "illegal label {label} at position {position}")
            }
            WitnessViolation::RepeatedVertex {
                position,
                first_seen,
            } => write!(
                f,
                "vertex after step {position} repeats vertex at position {first_seen}"
            ),
            WitnessViolation::NotClosed => write!(f, "word does not return to the start vertex"),
        }
    }
}

/// Replays `c` and reports the first violated invariant.
pub fn verify_witness(c: &CycleWitness) -> std::result::Result<(), WitnessViolation> {
    let params = &c.params;
    if c.start.m() != params.m || c.start.n() != params.n {
        return Err(WitnessViolation::ShapeMismatch);
    }
    if c.word.len() < MIN_CYCLE_LENGTH {
        return Err(WitnessViolation::TooShort {
            length: c.word.len(),
        });
    }
    for (position, &label) in c.word.iter().enumerate() {
        if label.index == 0 || label.index > params.n || (params.directed && !label.is_flip()) {
            return Err(WitnessViolation::IllegalLabel { position, label });
        }
    }
    let mut seen = std::collections::HashMap::with_capacity(c.word.len());
    let mut cur = c.start.clone();
    seen.insert(cur.rank(), 0usize);
    for (position, &label) in c.word.iter().enumerate() {
        cur.apply_in_place(label).expect("indices checked above");
        if position + 1 == c.word.len() {
            break;
        }
        if let Some(&first_seen) = seen.get(&cur.rank()) {
            return Err(WitnessViolation::RepeatedVertex {
                position: position + 1,
                first_seen,
            });
        }
        seen.insert(cur.rank(), position + 1);
    }
    if cur != c.start {
        return Err(WitnessViolation::NotClosed);
    }
    Ok(())
}

impl CycleWitness {
    pub fn new(params: GraphParams, start: GenPerm, word: Vec<EdgeLabel>) -> Self {
        CycleWitness {
            params,
            start,
            word,
        }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn verify(&self) -> Result<()> {
        verify_witness(self).map_err(|v| Error::Witness(v.to_string()))
    }

    /// The `len()` vertices in traversal order, starting with `start`.
    pub fn vertices(&self) -> Result<Vec<GenPerm>> {
        let mut out = Vec::with_capacity(self.word.len());
        let mut cur = self.start.clone();
        for &label in &self.word {
            out.push(cur.clone());
            cur.apply_in_place(label)?;
        }
        Ok(out)
    }

    /// Same cycle started `k` steps later.
    pub fn rotate(&self, k: usize) -> Result<Self> {
        let len = self.word.len();
        let k = k % len.max(1);
        let start = self.start.apply_word(&self.word[..k])?;
        let mut word = self.word[k..].to_vec();
        word.extend_from_slice(&self.word[..k]);
        Ok(CycleWitness {
            params: self.params,
            start,
            word,
        })
    }

    /// Same cycle traversed backwards from the same start.
    pub fn reversed(&self) -> Self {
        CycleWitness {
            params: self.params,
            start: self.start.clone(),
            word: self.word.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn to_record(&self) -> WitnessRecord {
        WitnessRecord {
            m: self.params.m,
            n: self.params.n,
            directed: self.params.directed,
            length: self.word.len(),
            start: self.start.to_string(),
            word: self.word.clone(),
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(&self.to_record()).expect("witness records always serialize")
    }
}

/// Serialized form of a [`CycleWitness`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub m: u32,
    pub n: usize,
    pub directed: bool,
    pub length: usize,
    pub start: String,
    pub word: Vec<EdgeLabel>,
}

impl WitnessRecord {
    /// Rebuilds the witness. Shape and notation are validated, the cycle
    /// itself is not; call [`CycleWitness::verify`] for that.
    pub fn to_witness(&self) -> Result<CycleWitness> {
        let params = GraphParams::new(self.m, self.n, self.directed)?;
        let start = GenPerm::parse(&self.start, self.m)?;
        if start.n() != self.n {
            return Err(Error::Parse(format!(
                "start has {} symbols, expected {}",
                start.n(),
                self.n
            )));
        }
        if self.length != self.word.len() {
            return Err(Error::Parse(format!(
                "length field {} disagrees with word length {}",
                self.length,
                self.word.len()
            )));
        }
        Ok(CycleWitness {
            params,
            start,
            word: self.word.clone(),
        })
    }
}

pub fn write_witness<W: Write>(out: &mut W, c: &CycleWitness) -> Result<()> {
    writeln!(out, "{}", c.to_json_line())?;
    Ok(())
}

/// Parses a witness file; each entry carries its 1-based line number.
/// Blank lines are skipped.
pub fn read_witnesses<R: BufRead>(input: R) -> Vec<(usize, Result<CycleWitness>)> {
    let mut out = Vec::new();
    for (k, line) in input.lines().enumerate() {
        let line_no = k + 1;
        let parsed = line.map_err(Error::from).and_then(|line| {
            if line.trim().is_empty() {
                return Ok(None);
            }
            let record: WitnessRecord =
                serde_json::from_str(&line).map_err(|e| Error::Parse(e.to_string()))?;
            record.to_witness().map(Some)
        });
        match parsed {
            Ok(None) => {}
            Ok(Some(w)) => out.push((line_no, Ok(w))),
            Err(e) => out.push((line_no, Err(e))),
        }
    }
    out
}

/// Distinct ranks visited by a witness; used by tests and splicing checks.
pub fn vertex_ranks(c: &CycleWitness) -> Result<HashSet<u64>> {
    Ok(c.vertices()?.iter().map(GenPerm::rank).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(m: u32, n: usize) -> GraphParams {
        GraphParams::undirected(m, n).unwrap()
    }

    #[test]
    fn triangle_accepts() {
        let g = up(3, 2);
        let w = CycleWitness::new(g, g.identity(), vec![EdgeLabel::flip(1); 3]);
        assert_eq!(verify_witness(&w), Ok(()));
    }

    #[test]
    fn two_step_rejected() {
        let g = up(3, 2);
        let w = CycleWitness::new(
            g,
            g.identity(),
            vec![EdgeLabel::flip(1), EdgeLabel::flop(1)],
        );
        assert_eq!(
            verify_witness(&w),
            Err(WitnessViolation::TooShort { length: 2 })
        );
    }

    #[test]
    fn violations_reported() {
        let g = up(3, 2);
        let e = g.identity();
        let w = CycleWitness::new(g, e.clone(), vec![EdgeLabel::flip(1); 4]);
        assert_eq!(
            verify_witness(&w),
            Err(WitnessViolation::RepeatedVertex {
                position: 3,
                first_seen: 0
            })
        );
        let w = CycleWitness::new(g, e.clone(), vec![EdgeLabel::flip(2); 3]);
        assert_eq!(verify_witness(&w), Err(WitnessViolation::NotClosed));
        let w = CycleWitness::new(g, e.clone(), vec![EdgeLabel::flip(3); 3]);
        assert!(matches!(
            verify_witness(&w),
            Err(WitnessViolation::IllegalLabel { position: 0, .. })
        ));
        let d = GraphParams::directed(3, 2).unwrap();
        let w = CycleWitness::new(d, e.clone(), vec![EdgeLabel::flop(1); 3]);
        assert!(matches!(
            verify_witness(&w),
            Err(WitnessViolation::IllegalLabel { .. })
        ));
        let w = CycleWitness::new(up(4, 2), e, vec![EdgeLabel::flip(1); 4]);
        assert_eq!(verify_witness(&w), Err(WitnessViolation::ShapeMismatch));
    }

    #[test]
    fn record_round_trip() {
        let g = up(3, 2);
        let w = CycleWitness::new(
            g,
            g.identity().flip(2).unwrap(),
            vec![EdgeLabel::flop(1); 3],
        );
        let line = w.to_json_line();
        assert_eq!(
            line,
            r#"{"m":3,"n":2,"directed":false,"length":3,"start":"2^1 1^1","word":["b1","b1","b1"]}"#
        );
        let back = read_witnesses(format!("{line}\n\n").as_bytes());
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].0, 1);
        assert_eq!(back[0].1.as_ref().unwrap(), &w);
    }

    #[test]
    fn malformed_lines_keep_line_numbers() {
        let text = "\n{\"m\":3}\n";
        let back = read_witnesses(text.as_bytes());
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].0, 2);
        assert!(back[0].1.is_err());
    }

    #[test]
    fn rotate_and_reverse_preserve_validity() {
        let g = up(7, 2);
        let w = CycleWitness::new(
            g,
            g.identity(),
            vec![
                EdgeLabel::flop(1),
                EdgeLabel::flop(2),
                EdgeLabel::flop(2),
                EdgeLabel::flip(1),
                EdgeLabel::flip(2),
                EdgeLabel::flip(2),
            ],
        );
        w.verify().unwrap();
        for k in 0..6 {
            w.rotate(k).unwrap().verify().unwrap();
        }
        w.reversed().verify().unwrap();
        assert_eq!(
            vertex_ranks(&w).unwrap(),
            vertex_ranks(&w.reversed()).unwrap()
        );
    }
}
