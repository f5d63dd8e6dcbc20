//! Explicit cycles of every admissible length in `UP(m, n)`.
//!
//! Long cycles are built by merging shorter ones onto the base cycle
//! `(Flip(n−1) Flop(n))^{mn}`. Each sub-cycle lives in one copy of
//! `UP(m, n − 1)` and shares exactly one edge with the base cycle; splicing
//! swaps that edge for the rest of the sub-cycle.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{copy_id, CopyId, GraphParams};
use crate::group::{EdgeLabel, GenPerm};
use crate::search::{parallel_cycle_search, SearchConfig};
use crate::witness::CycleWitness;

/// `m^n · n!`, or `None` on overflow.
fn order(m: u32, n: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for k in 1..=n as u64 {
        acc = acc.checked_mul(m as u64)?.checked_mul(k)?;
    }
    Some(acc)
}

/// Size of one copy of `UP(m, n − 1)`.
fn copy_size(m: u32, n: usize) -> u64 {
    order(m, n - 1).expect("shape validated by caller")
}

/// The base cycle `(Flip(n−1) Flop(n))^{mn}` from the identity.
pub fn base_cycle(m: u32, n: usize) -> Result<CycleWitness> {
    if n < 2 {
        return Err(Error::NeedsTwoSymbols);
    }
    let params = GraphParams::with_cap(m, n, false, u64::MAX)?;
    if m == 1 && n == 2 {
        // Flip(1) is a self-loop in the pancake graph on two symbols.
        return Err(Error::Construction(
            "UP(1,2) has 2 vertices and no base cycle".into(),
        ));
    }
    let mn = m as usize * n;
    let word = (0..mn)
        .flat_map(|_| [EdgeLabel::flip(n - 1), EdgeLabel::flop(n)])
        .collect();
    let c = CycleWitness::new(params, params.identity(), word);
    c.verify()
        .map_err(|e| Error::Construction(format!("base cycle: {e}")))?;
    let copies: HashSet<CopyId> = shared_edges(&c)?.iter().map(|e| e.copy).collect();
    if copies.len() != mn {
        return Err(Error::Construction(format!(
            "base cycle index-{} edges span {} copies, expected {mn}",
            n - 1,
            copies.len()
        )));
    }
    Ok(c)
}

/// An index-`(n−1)` edge of the base cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SharedEdge {
    pub copy: CopyId,
    /// Word position of the edge in the base cycle.
    pub position: usize,
    #[serde(with = "perm_text")]
    pub from: GenPerm,
    #[serde(with = "perm_text")]
    pub to: GenPerm,
}

mod perm_text {
    use serde::Serializer;

    use crate::group::GenPerm;

    pub fn serialize<S: Serializer>(p: &GenPerm, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(p)
    }
}

/// The `mn` flip edges of index `n − 1` on `base`, in traversal order.
fn shared_edges(base: &CycleWitness) -> Result<Vec<SharedEdge>> {
    let n = base.params.n;
    let vertices = base.vertices()?;
    let len = vertices.len();
    let mut out = Vec::new();
    for (position, label) in base.word.iter().enumerate() {
        if label.index == n - 1 {
            let from = vertices[position].clone();
            let to = vertices[(position + 1) % len].clone();
            out.push(SharedEdge {
                copy: copy_id(&from)?,
                position,
                from,
                to,
            });
        }
    }
    Ok(out)
}

/// The label `l` with `a · l = b`, restricted to the graph's generators.
fn edge_label(params: &GraphParams, a: &GenPerm, b: &GenPerm) -> Result<EdgeLabel> {
    params.check_compatible(a)?;
    params.check_compatible(b)?;
    let mut candidates = params.labels();
    if !params.directed {
        candidates.extend(params.labels().into_iter().map(EdgeLabel::inverse));
    }
    candidates
        .into_iter()
        .find(|&l| a.apply(l).as_ref() == Ok(b))
        .ok_or_else(|| Error::NotAnEdge {
            a: a.to_string(),
            b: b.to_string(),
        })
}

/// Moves `c` by the left-multiplication automorphism that carries one of
/// its edges onto `target_edge`.
///
/// The result keeps the label word (rotated, and reversed when the matching
/// edge is traversed the other way) and traverses `target_edge` first.
pub fn translate_cycle(
    c: &CycleWitness,
    target_edge: (&GenPerm, &GenPerm),
) -> Result<CycleWitness> {
    let (x, y) = target_edge;
    let want = edge_label(&c.params, x, y)?;
    let len = c.len();
    let vertices = c.vertices()?;
    let own = (0..len).find(|&k| &vertices[k] == x && &vertices[(k + 1) % len] == y);
    let same = own.or_else(|| c.word.iter().position(|&l| l == want));
    let oriented = match same {
        Some(k) => c.rotate(k)?,
        None if !c.params.directed => {
            let k = c
                .word
                .iter()
                .position(|&l| l.index == want.index)
                .ok_or(Error::NoEdgeWithIndex(want.index))?;
            // Start just after the edge and walk backwards across it.
            let r = c.rotate((k + 1) % len)?.reversed();
            if r.word[0] != want {
                return Err(Error::NoEdgeWithIndex(want.index));
            }
            r
        }
        None => return Err(Error::NoEdgeWithIndex(want.index)),
    };
    let delta = x.multiply(&oriented.start.inverse())?;
    let start = delta.multiply(&oriented.start)?;
    let out = CycleWitness::new(c.params, start, oriented.word);
    out.verify()
        .map_err(|e| Error::Construction(format!("translated cycle: {e}")))?;
    Ok(out)
}

/// How a target length is split across sub-cycles merged onto the base cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MergePlan {
    pub m: u32,
    pub n: usize,
    pub target_length: usize,
    pub q: usize,
    pub sub_lengths: Vec<usize>,
    pub assignments: Vec<SharedEdge>,
}

/// Bounds for merging in `UP(m, n)`: `(s, M)` with
/// `s = m^{n−2}(n−2)!` and `M = m^{n−1}(n−1)!`.
pub fn merge_bounds(m: u32, n: usize) -> Result<(usize, usize)> {
    if n < 3 {
        return Err(Error::Construction(format!(
            "merging needs n >= 3, got {n}"
        )));
    }
    let s = order(m, n - 2).ok_or(Error::TooManyVertices {
        count: u128::MAX,
        cap: u64::MAX,
    })?;
    Ok((s as usize, copy_size(m, n) as usize))
}

/// Smallest legal sub-cycle length: just above `s`, even when `m` is even.
fn min_sub_length(m: u32, s: usize) -> usize {
    if m.is_multiple_of(2) && (s + 1) % 2 == 1 {
        s + 2
    } else {
        s + 1
    }
}

impl MergePlan {
    /// A plan with explicit sub-lengths and base-edge positions (indices into
    /// the `mn` shared edges, in traversal order).
    pub fn with_edges(m: u32, n: usize, sub_lengths: Vec<usize>, edges: &[usize]) -> Result<Self> {
        let base = base_cycle(m, n)?;
        let shared = shared_edges(&base)?;
        if sub_lengths.len() != edges.len() {
            return Err(Error::Construction(format!(
                "{} sub-lengths for {} edges",
                sub_lengths.len(),
                edges.len()
            )));
        }
        let mut assignments = Vec::with_capacity(edges.len());
        for &e in edges {
            let edge = shared.get(e).ok_or_else(|| {
                Error::Construction(format!(
                    "shared edge {e} out of range [0, {})",
                    shared.len()
                ))
            })?;
            assignments.push(edge.clone());
        }
        let q = sub_lengths.len();
        let total: usize = sub_lengths.iter().map(|l| l - 1).sum();
        let plan = MergePlan {
            m,
            n,
            target_length: total + 2 * m as usize * n - q,
            q,
            sub_lengths,
            assignments,
        };
        plan.validate()?;
        Ok(plan)
    }

    /// Checks every plan invariant.
    pub fn validate(&self) -> Result<()> {
        let (s, big) = merge_bounds(self.m, self.n)?;
        let mn = self.m as usize * self.n;
        let bad = |why: String| Err(Error::Construction(why));
        if self.q == 0 || self.q > mn {
            return bad(format!("q = {} outside [1, {mn}]", self.q));
        }
        if self.sub_lengths.len() != self.q || self.assignments.len() != self.q {
            return bad("plan lists disagree with q".into());
        }
        for &l in &self.sub_lengths {
            if l <= s || l > big {
                return bad(format!("sub-length {l} outside ({s}, {big}]"));
            }
            if self.m.is_multiple_of(2) && l % 2 == 1 {
                return bad(format!("odd sub-length {l} for even m"));
            }
        }
        let copies: HashSet<CopyId> = self.assignments.iter().map(|a| a.copy).collect();
        if copies.len() != self.q {
            return bad("two sub-cycles assigned to one copy".into());
        }
        let sum: usize = self.sub_lengths.iter().map(|l| l - 1).sum();
        if sum + mn * 2 - self.q != self.target_length {
            return bad(format!(
                "lengths sum to {} not {}",
                sum + mn * 2 - self.q,
                self.target_length
            ));
        }
        Ok(())
    }
}

/// Splits `target` into sub-cycle lengths with the smallest feasible `q`.
///
/// Only called for targets above `M`; shorter cycles fit in one copy.
pub fn plan_merge(m: u32, n: usize, target: usize) -> Result<MergePlan> {
    let reject = |reason: String| Error::InadmissibleLength {
        m,
        n,
        length: target,
        reason,
    };
    let (s, big) = merge_bounds(m, n)?;
    let total = order(m, n).ok_or_else(|| reject("graph too large".into()))? as usize;
    let mn = m as usize * n;
    let lo = min_sub_length(m, s);
    let first = lo + 2 * mn - 2;
    if target < first || target > total {
        return Err(reject(format!("merging covers [{first}, {total}]")));
    }
    if m.is_multiple_of(2) && target % 2 == 1 {
        return Err(reject(format!(
            "even m admits only even lengths in [{first}, {total}]"
        )));
    }
    for q in 1..=mn {
        let sum = target + 2 * q;
        if sum < 2 * mn {
            continue;
        }
        let sum = sum - 2 * mn;
        if sum < q * lo || sum > q * big {
            continue;
        }
        let mut sub_lengths = Vec::with_capacity(q);
        let mut left = sum;
        for i in 0..q {
            let rest = q - 1 - i;
            let l = big.min(left - rest * lo);
            sub_lengths.push(l);
            left -= l;
        }
        let edges: Vec<usize> = (0..q).collect();
        let plan = MergePlan::with_edges(m, n, sub_lengths, &edges)?;
        debug_assert_eq!(plan.target_length, target);
        return Ok(plan);
    }
    Err(reject(format!("no split into sub-cycles in ({s}, {big}]")))
}

/// Embeds a cycle of `UP(m, n − 1)` into the copy `n^0` of `UP(m, n)`.
pub fn lift(c: &CycleWitness) -> Result<CycleWitness> {
    let p = c.params;
    let params = GraphParams::with_cap(p.m, p.n + 1, false, u64::MAX)?;
    let mut symbols = c.start.symbols().to_vec();
    let mut signs = c.start.signs().to_vec();
    symbols.push(p.n as u32 + 1);
    signs.push(0);
    let start = GenPerm::new(p.m, symbols, signs)?;
    Ok(CycleWitness::new(params, start, c.word.clone()))
}

/// Splices the sub-cycles onto the base cycle of `plan`.
///
/// `subs[i]` must be a cycle of `UP(m, n)` of length `plan.sub_lengths[i]`
/// containing an index-`(n−1)` edge; it is translated onto its assigned edge.
pub fn splice(plan: &MergePlan, subs: &[CycleWitness]) -> Result<CycleWitness> {
    plan.validate()?;
    let base = base_cycle(plan.m, plan.n)?;
    if subs.len() != plan.q {
        return Err(Error::Construction(format!(
            "{} sub-cycles for q = {}",
            subs.len(),
            plan.q
        )));
    }
    let mut detours: BTreeMap<usize, Vec<EdgeLabel>> = BTreeMap::new();
    for ((sub, &len), edge) in subs.iter().zip(&plan.sub_lengths).zip(&plan.assignments) {
        if sub.len() != len {
            return Err(Error::Construction(format!(
                "sub-cycle of length {} where {len} was planned",
                sub.len()
            )));
        }
        if !sub.word.iter().any(|l| l.index == plan.n - 1) {
            return Err(Error::NoEdgeWithIndex(plan.n - 1));
        }
        let t = translate_cycle(sub, (&edge.from, &edge.to))?;
        // t runs from -> to along the shared edge, then back to `from`;
        // the detour is that remainder walked backwards.
        let detour = t.word[1..].iter().rev().map(|l| l.inverse()).collect();
        detours.insert(edge.position, detour);
    }
    let mut word = Vec::with_capacity(plan.target_length);
    for (position, &label) in base.word.iter().enumerate() {
        match detours.get(&position) {
            Some(detour) => word.extend_from_slice(detour),
            None => word.push(label),
        }
    }
    let out = CycleWitness::new(base.params, base.start.clone(), word);
    if out.len() != plan.target_length {
        return Err(Error::Construction(format!(
            "merged length {} differs from planned {}",
            out.len(),
            plan.target_length
        )));
    }
    out.verify()
        .map_err(|e| Error::Construction(format!("merged cycle: {e}")))?;
    Ok(out)
}

type Spectrum = Arc<BTreeMap<usize, CycleWitness>>;

/// Witnesses for every cycle length of `UP(m, 2)`, found once per `m`.
pub fn two_symbol_cycles(m: u32) -> Result<Spectrum> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Spectrum>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().expect("cache lock").get(&m) {
        return Ok(hit.clone());
    }
    let params = GraphParams::undirected(m, 2)?;
    let outcome = parallel_cycle_search(&SearchConfig::new(params), None)?;
    let spectrum = Arc::new(outcome.witnesses);
    cache
        .lock()
        .expect("cache lock")
        .entry(m)
        .or_insert_with(|| spectrum.clone());
    Ok(spectrum)
}

/// Checks that `UP(m, n)` should contain a cycle of length `target`.
pub fn check_admissible(m: u32, n: usize, target: usize) -> Result<()> {
    let reject = |reason: String| {
        Err(Error::InadmissibleLength {
            m,
            n,
            length: target,
            reason,
        })
    };
    if m < 3 {
        return reject("construction needs m >= 3".into());
    }
    if n == 0 {
        return Err(Error::ZeroLength);
    }
    let Some(total) = order(m, n) else {
        return reject("graph too large".into());
    };
    let total = total as usize;
    if n == 1 {
        if target != m as usize {
            return reject(format!("UP({m},1) is a single {m}-cycle"));
        }
        return Ok(());
    }
    let low = (m as usize).min(6);
    if m.is_multiple_of(2) {
        if target % 2 == 1 || target < low || target > total {
            return reject(format!(
                "admissible lengths are the even numbers in [{low}, {total}]"
            ));
        }
    } else if target < low || target > total {
        return reject(format!("admissible lengths are [{low}, {total}]"));
    }
    Ok(())
}

/// Every admissible cycle length of `UP(m, n)`, ascending.
pub fn admissible_lengths(m: u32, n: usize) -> Result<Vec<usize>> {
    check_admissible(
        m,
        n,
        if n == 1 {
            m as usize
        } else {
            (m as usize).min(6)
        },
    )?;
    if n == 1 {
        return Ok(vec![m as usize]);
    }
    let total = order(m, n).expect("checked") as usize;
    let step = if m.is_multiple_of(2) { 2 } else { 1 };
    Ok(((m as usize).min(6)..=total).step_by(step).collect())
}

/// A verified cycle of exactly `target` vertices in `UP(m, n)`.
pub fn construct_cycle(m: u32, n: usize, target: usize) -> Result<CycleWitness> {
    check_admissible(m, n, target)?;
    let c = build(m, n, target)?;
    if c.len() != target {
        return Err(Error::Construction(format!(
            "built length {} for target {target}",
            c.len()
        )));
    }
    c.verify()?;
    Ok(c)
}

fn build(m: u32, n: usize, target: usize) -> Result<CycleWitness> {
    if n == 1 {
        let params = GraphParams::with_cap(m, 1, false, u64::MAX)?;
        return Ok(CycleWitness::new(
            params,
            params.identity(),
            vec![EdgeLabel::flip(1); m as usize],
        ));
    }
    if n == 2 {
        return two_symbol_cycles(m)?.get(&target).cloned().ok_or_else(|| {
            Error::Construction(format!("UP({m},2) has no cycle of length {target}"))
        });
    }
    let (s, big) = merge_bounds(m, n)?;
    if target <= big {
        return lift(&build(m, n - 1, target)?);
    }
    let first_merge = min_sub_length(m, s) + 2 * m as usize * n - 2;
    if target < first_merge {
        // Between one copy and the shortest merge; only (3, 3) hits this.
        return targeted_search(m, n, target);
    }
    let plan = plan_merge(m, n, target)?;
    let subs = plan
        .sub_lengths
        .iter()
        .map(|&l| lift(&build(m, n - 1, l)?))
        .collect::<Result<Vec<_>>>()?;
    splice(&plan, &subs)
}

fn targeted_search(m: u32, n: usize, target: usize) -> Result<CycleWitness> {
    let params = GraphParams::undirected(m, n)?;
    let config = SearchConfig::new(params).length_range(target, target);
    let outcome = parallel_cycle_search(&config, None)?;
    outcome
        .witnesses
        .get(&target)
        .cloned()
        .ok_or_else(|| Error::Construction(format!("UP({m},{n}) has no cycle of length {target}")))
}

/// A cycle through all `m^n · n!` vertices.
pub fn hamiltonian_cycle(m: u32, n: usize) -> Result<CycleWitness> {
    let total = order(m, n).ok_or(Error::TooManyVertices {
        count: u128::MAX,
        cap: u64::MAX,
    })?;
    construct_cycle(m, n, total as usize)
}
