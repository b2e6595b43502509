//! Iteration invariants: degree sequences, base-point counts of iterates (by direct
//! tree builds and by tracking orbits of base points), persistent base points, the
//! dynamical number of base points and regularizability verdicts.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::bubble::{base_point_tree, BubblePoint, BubblePointJson, ResolvedMap};
use crate::algebra::MultiPoly;
use crate::error::{Error, Result};
use crate::plane_map::{Automorphism, Birational, PlaneMap, Side};

pub mod report;

pub use report::{iteration_report, IterationReport, ReportOptions};

pub const DEFAULT_DEGREE_HORIZON: usize = 3;
pub const DEFAULT_TRACKED_HORIZON: usize = 12;
pub const DEFAULT_PERSISTENCE_HORIZON: usize = 6;
/// Series precision at which tracked transports stop and keep a certified prefix.
pub const DEFAULT_TRANSPORT_BUDGET: usize = 64;

/// Degrees of `f, f², …, f^n_max`, composing symbolically and removing common factors.
pub fn degree_sequence(f: &PlaneMap, n_max: usize, cap: u64) -> Result<Vec<u64>> {
    let mut out = Vec::with_capacity(n_max);
    let mut it = f.clone();
    for k in 1..=n_max {
        if k > 1 {
            let next = (it.degree() as u64) * (f.degree() as u64);
            if next > cap {
                return Err(Error::DegreeCapExceeded { degree: next, cap });
            }
            it = f.compose_capped(&it, cap)?;
        }
        out.push(it.degree() as u64);
    }
    Ok(out)
}

/// Degrees of the iterates up to `n_max`, stopping before the first one above `cap`.
pub fn degree_sequence_prefix(f: &PlaneMap, n_max: usize, cap: u64) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    let mut it = f.clone();
    for k in 1..=n_max {
        if k > 1 {
            match f.compose_capped(&it, cap) {
                Ok(next) => it = next,
                Err(Error::DegreeCapExceeded { .. }) => break,
                Err(e) => return Err(e),
            }
        }
        out.push(it.degree() as u64);
    }
    Ok(out)
}

/// `b(f^k)` for `k = 1..=k_max` from the trees of the composed iterates.
pub fn b_sequence_direct(f: &PlaneMap, k_max: usize, cap: u64) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(k_max);
    let mut it = f.clone();
    for k in 1..=k_max {
        if k > 1 {
            it = f.compose_capped(&it, cap)?;
        }
        out.push(base_point_tree(&it)?.len());
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Direct,
    Tracked,
    /// Filled in from a detected period.
    TrackedPeriodic,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Tracked => "tracked",
            Method::TrackedPeriodic => "tracked-periodic",
        }
    }
}

/// First step `k` at which some base point of `f` is a base point of `f^{-k}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Collision {
    pub step: usize,
    /// Indices (into the tree of `f`) of base points of `f` lying in `Base(f^{-k})`.
    pub base_points: Vec<usize>,
    /// Indices (into the tree of `f⁻¹`) of base points of `f⁻¹` lying in `Base(f^k)`.
    pub inverse_base_points: Vec<usize>,
    /// The colliding base points of `f⁻¹` are its first one or two tree nodes.
    pub initial_segment_shape: bool,
}

/// Orbits of the base points of `f` under `(f⁻¹)•` and of those of `f⁻¹` under `f•`,
/// and the base-point sets of the iterates they determine.
#[derive(Clone, Debug)]
pub struct Tracker {
    pub forward: ResolvedMap,
    pub backward: ResolvedMap,
    /// `p_layers[m][j] = (f^{-m})•(p_j)`, or a prefix of it where `p_complete` is false.
    pub p_layers: Vec<Vec<BubblePoint>>,
    pub p_complete: Vec<Vec<bool>>,
    /// `q_layers[m][j] = (f^m)•(q_j)`, likewise.
    pub q_layers: Vec<Vec<BubblePoint>>,
    pub q_complete: Vec<Vec<bool>>,
    pub transport_budget: usize,
    /// Series precision of the last refinement; 0 while layers hold proper
    /// images only.
    pub refined: usize,
    forward_jacobian: MultiPoly,
    backward_jacobian: MultiPoly,
    /// `b[k-1] = b(f^k)` where known.
    pub b: Vec<Option<usize>>,
    pub methods: Vec<Option<Method>>,
    pub collision: Option<Collision>,
    /// `Some(P)` when `f^P` is an automorphism.
    pub period: Option<usize>,
    /// Layers determining `Base(f^{±k})` are available for `k <= exact_through`.
    pub exact_through: usize,
    pub diagnostics: Vec<String>,
}

/// Whether the point `x` equals the point `y` (known only as a prefix unless `complete`).
fn same_point(x: &BubblePoint, y: &BubblePoint, complete: bool) -> Option<bool> {
    if complete {
        Some(x == y)
    } else if x.is_above_or_equal(y) {
        None
    } else {
        Some(false)
    }
}

/// Membership of `x` in a set of possibly partial points.
fn member<'a>(x: &BubblePoint, mut set: impl Iterator<Item = (&'a BubblePoint, bool)>) -> Option<bool> {
    let mut unknown = false;
    for (y, complete) in &mut set {
        match same_point(x, y, complete) {
            Some(true) => return Some(true),
            Some(false) => {}
            None => unknown = true,
        }
    }
    if unknown {
        None
    } else {
        Some(false)
    }
}

fn transport_error(step: usize, p: &BubblePoint, e: Error) -> Error {
    Error::TransportFailure {
        step,
        point: p.to_string(),
        reason: e.to_string(),
    }
}

impl Tracker {
    pub fn new(f: &Birational, k_max: usize) -> Result<Self> {
        Self::with_budget(f, k_max, DEFAULT_TRANSPORT_BUDGET)
    }

    pub fn with_budget(f: &Birational, k_max: usize, budget: usize) -> Result<Self> {
        let forward = ResolvedMap::new(f.map.clone())?;
        let backward = ResolvedMap::new(f.inverse.clone())?;
        Self::from_resolved(forward, backward, k_max, budget)
    }

    pub fn from_resolved(forward: ResolvedMap, backward: ResolvedMap, k_max: usize, budget: usize) -> Result<Self> {
        let k_max = k_max.max(1);
        let base: Vec<BubblePoint> = forward.tree.points().cloned().collect();
        let inv_base: Vec<BubblePoint> = backward.tree.points().cloned().collect();
        if base.len() != inv_base.len() {
            return Err(Error::Invalid(format!(
                "map has {} base points but its inverse has {}",
                base.len(),
                inv_base.len()
            )));
        }
        let n = base.len();
        let mut t = Tracker {
            p_layers: vec![base.clone()],
            p_complete: vec![vec![true; n]],
            q_layers: vec![inv_base.clone()],
            q_complete: vec![vec![true; n]],
            transport_budget: budget,
            refined: 0,
            forward_jacobian: forward.map.jacobian()?,
            backward_jacobian: backward.map.jacobian()?,
            b: vec![None; k_max],
            methods: vec![None; k_max],
            collision: None,
            period: None,
            exact_through: 0,
            diagnostics: Vec::new(),
            forward,
            backward,
        };
        t.b[0] = Some(n);
        t.methods[0] = Some(Method::Tracked);
        if n == 0 {
            for k in 0..k_max {
                t.b[k] = Some(0);
                t.methods[k] = Some(Method::Tracked);
            }
            t.period = Some(1);
            t.exact_through = k_max;
            return Ok(t);
        }
        // Invariant at the top of iteration k: layers 0..k-1 are known, so the
        // sets S_k = Base(f^k) and T_k = Base(f^{-k}) are their unions.
        for k in 1..=k_max {
            t.exact_through = k;
            if t.collision_membership(k).is_none() {
                t.refine_until(|t| t.collision_membership(k).is_some())?;
            }
            let Some((in_p, in_q)) = t.collision_membership(k) else {
                t.diagnostics.push(format!(
                    "step {}: transported points known only up to a prefix (precision budget {}) leave Base(f) ∩ Base(f^-{}) undetermined; tracking stops",
                    k, budget, k
                ));
                break;
            };
            let hits_p: Vec<usize> = (0..n).filter(|&j| in_p[j]).collect();
            let hits_q: Vec<usize> = (0..n).filter(|&j| in_q[j]).collect();
            if hits_p.len() != hits_q.len() {
                t.diagnostics.push(format!(
                    "step {}: {} base points of f lie in Base(f^-k) but {} base points of f^-1 lie in Base(f^k)",
                    k,
                    hits_p.len(),
                    hits_q.len()
                ));
            }
            let c = hits_p.len();
            if k == k_max {
                break;
            }
            let b_k = t.b[k - 1].unwrap();
            let b_next = (b_k + n)
                .checked_sub(2 * c)
                .ok_or_else(|| Error::Invalid(format!("negative base-point count at step {}", k + 1)))?;
            t.b[k] = Some(b_next);
            t.methods[k] = Some(Method::Tracked);
            if c > 0 {
                let shape = hits_q == vec![0] || hits_q == vec![0, 1];
                t.collision = Some(Collision {
                    step: k,
                    base_points: hits_p,
                    inverse_base_points: hits_q,
                    initial_segment_shape: shape,
                });
                if b_next == 0 {
                    let period = k + 1;
                    t.period = Some(period);
                    for j in (k + 1)..k_max {
                        let r = (j + 1) % period;
                        t.b[j] = if r == 0 { Some(0) } else { t.b[r - 1] };
                        t.methods[j] = Some(Method::TrackedPeriodic);
                    }
                } else {
                    t.diagnostics.push(format!(
                        "collision at step {} without return to an automorphism; tracking stops at b(f^{})",
                        k,
                        k + 1
                    ));
                }
                break;
            }
            t.extend(k)?;
        }
        if !t.classes_determined() {
            t.refine_until(|t| t.classes_determined())?;
        }
        Ok(t)
    }

    /// `Base(f) ∩ Base(f^{-k})` and `Base(f⁻¹) ∩ Base(f^k)` as membership flags, if decidable.
    fn collision_membership(&self, k: usize) -> Option<(Vec<bool>, Vec<bool>)> {
        let in_p = self.base().iter().map(|p| member(p, self.layer_points(true, k))).collect::<Option<Vec<_>>>()?;
        let in_q = self
            .inverse_base()
            .iter()
            .map(|q| member(q, self.layer_points(false, k)))
            .collect::<Option<Vec<_>>>()?;
        Some((in_p, in_q))
    }

    /// Appends layer `k` on both sides.
    fn extend(&mut self, k: usize) -> Result<()> {
        let (next_p, done_p) = self.push_layer(true, k - 1)?;
        let (next_q, done_q) = self.push_layer(false, k - 1)?;
        self.p_layers.push(next_p);
        self.p_complete.push(done_p);
        self.q_layers.push(next_q);
        self.q_complete.push(done_q);
        Ok(())
    }

    /// Images of layer `m` under `f⁻¹` (p side) or `f` (q side). Before refinement
    /// only proper images are computed when the anchor is not indeterminate: the
    /// image of a point over a regular point `P` lies over `f(P)`, and equals it
    /// when the point is `P` itself and the Jacobian does not vanish there.
    /// Otherwise, and after refinement, series transport is used; a prefix that is
    /// not a base point goes to a prefix of the image of any point above it.
    fn push_layer(&self, p_side: bool, m: usize) -> Result<(Vec<BubblePoint>, Vec<bool>)> {
        (0..self.p_layers[m].len()).map(|j| self.push_point(p_side, m, j)).collect::<Result<Vec<_>>>().map(|v| v.into_iter().unzip())
    }

    fn push_point(&self, p_side: bool, m: usize, j: usize) -> Result<(BubblePoint, bool)> {
        let (rm, jac, p, c) = if p_side {
            (&self.backward, &self.backward_jacobian, &self.p_layers[m][j], self.p_complete[m][j])
        } else {
            (&self.forward, &self.forward_jacobian, &self.q_layers[m][j], self.q_complete[m][j])
        };
        let anchor_is_base = rm.tree.points().any(|b| b.is_proper() && b.anchor == p.anchor);
        if self.refined == 0 && !anchor_is_base {
            let img = rm.map.evaluate(&p.anchor).map_err(|e| transport_error(m + 1, p, e))?;
            let exact = c && p.is_proper() && !jac.eval(p.anchor.coords()).is_zero();
            Ok((BubblePoint::proper(img), exact))
        } else {
            let budget = if self.refined == 0 { self.transport_budget } else { self.refined };
            let img = rm.push_forward_within(p, budget).map_err(|e| transport_error(m + 1, p, e))?;
            Ok((img.point, c && img.complete))
        }
    }

    /// Refines with precision 16, 32, … up to the budget until `done` holds.
    fn refine_until(&mut self, done: impl Fn(&Self) -> bool) -> Result<()> {
        let mut prec = (self.refined * 2).clamp(16, self.transport_budget.max(16));
        while self.refined < self.transport_budget {
            self.refine_at(prec.min(self.transport_budget))?;
            if done(self) {
                break;
            }
            prec *= 2;
        }
        Ok(())
    }

    /// Refines every layer at the full transport budget.
    pub fn refine(&mut self) -> Result<()> {
        if self.refined < self.transport_budget {
            self.refine_at(self.transport_budget)?;
        }
        Ok(())
    }

    /// Recomputes all transported layers by series transport at precision `prec`,
    /// keeping the longer of the old and new certified prefixes.
    fn refine_at(&mut self, prec: usize) -> Result<()> {
        self.refined = prec;
        for m in 1..self.p_layers.len() {
            for p_side in [true, false] {
                for j in 0..self.p_layers[m].len() {
                    let done = if p_side { self.p_complete[m][j] } else { self.q_complete[m][j] };
                    if done {
                        continue;
                    }
                    let (p, c) = self.push_point(p_side, m - 1, j)?;
                    let (slot, flag) = if p_side {
                        (&mut self.p_layers[m][j], &mut self.p_complete[m][j])
                    } else {
                        (&mut self.q_layers[m][j], &mut self.q_complete[m][j])
                    };
                    if c || p.level() > slot.level() {
                        *slot = p;
                        *flag = c;
                    }
                }
            }
        }
        Ok(())
    }

    /// Points of layers `0..k` (inverse side when `inverse`) with completeness flags.
    fn layer_points(&self, inverse: bool, k: usize) -> impl Iterator<Item = (&BubblePoint, bool)> {
        let (layers, flags) = if inverse {
            (&self.q_layers, &self.q_complete)
        } else {
            (&self.p_layers, &self.p_complete)
        };
        layers
            .iter()
            .zip(flags)
            .take(k)
            .flat_map(|(l, c)| l.iter().zip(c.iter().copied()))
    }

    /// True when every transported point is known exactly.
    pub fn all_complete(&self) -> bool {
        self.p_complete.iter().chain(&self.q_complete).flatten().all(|&c| c)
    }

    pub fn base(&self) -> &[BubblePoint] {
        &self.p_layers[0]
    }

    pub fn inverse_base(&self) -> &[BubblePoint] {
        &self.q_layers[0]
    }

    /// Number of layers describing `Base(f^{±k})`, reduced by the period if any.
    fn layers_for(&self, k: usize) -> Option<usize> {
        if k <= self.exact_through {
            return Some(k);
        }
        let r = k % self.period?;
        (r <= self.exact_through).then_some(r)
    }

    fn exact_set(&self, inverse: bool, k: usize) -> Option<BTreeSet<BubblePoint>> {
        let m = self.layers_for(k)?;
        let mut out = BTreeSet::new();
        for (p, complete) in self.layer_points(inverse, m) {
            if !complete {
                return None;
            }
            out.insert(p.clone());
        }
        Some(out)
    }

    /// `Base(f^k)` when known exactly.
    pub fn forward_base(&self, k: usize) -> Option<BTreeSet<BubblePoint>> {
        self.exact_set(false, k)
    }

    /// `Base(f^{-k})` when known exactly.
    pub fn backward_base(&self, k: usize) -> Option<BTreeSet<BubblePoint>> {
        self.exact_set(true, k)
    }

    pub fn in_forward_base(&self, p: &BubblePoint, k: usize) -> Option<bool> {
        member(p, self.layer_points(false, self.layers_for(k)?))
    }

    pub fn in_backward_base(&self, p: &BubblePoint, k: usize) -> Option<bool> {
        member(p, self.layer_points(true, self.layers_for(k)?))
    }

    /// Pairs `(i, j)` with `(f^{-m})•(p_i)` equal to `p_j` (`Some(true)`) or possibly
    /// equal (`None`), over the computed layers.
    fn orbit_links(&self) -> Vec<(usize, usize, Option<bool>)> {
        let mut out = Vec::new();
        for (layer, flags) in self.p_layers.iter().zip(&self.p_complete).skip(1) {
            for (i, p) in layer.iter().enumerate() {
                for (j, b) in self.base().iter().enumerate() {
                    match same_point(b, p, flags[i]) {
                        Some(false) => {}
                        r => out.push((i, j, r)),
                    }
                }
            }
        }
        out
    }

    pub fn classes_determined(&self) -> bool {
        self.orbit_links().iter().all(|l| l.2.is_some())
    }

    /// Equivalence classes of base points of `f`: `p_i ~ p_j` when some
    /// `(f^{-m})•(p_i) = p_j`. Undecided pairs are merged, which can only lower the
    /// number of classes. Returned as sorted index lists.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let n = self.base().len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while parent[r] != r {
                r = parent[r];
            }
            let mut c = i;
            while parent[c] != r {
                let next = parent[c];
                parent[c] = r;
                c = next;
            }
            r
        }
        for (i, j, _) in self.orbit_links() {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..n {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
        groups.into_values().collect()
    }
}

/// Tracked `b(f^k)` for `k = 1..=k_max`.
pub fn b_sequence_tracked(f: &Birational, k_max: usize) -> Result<Vec<Option<usize>>> {
    Ok(Tracker::new(f, k_max)?.b)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepStatus {
    pub k: usize,
    pub in_forward_base: Option<bool>,
    pub in_backward_base: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PersistenceRecord {
    /// Tree indices of the base points of `f` in the class.
    pub members: Vec<usize>,
    pub representative: BubblePointJson,
    /// `(f^{-m})•` images of the representative, `m = 0, 1, …`; entries flagged
    /// incomplete are prefixes of the image.
    pub orbit: Vec<BubblePointJson>,
    pub orbit_complete: Vec<bool>,
    pub status: Vec<StepStatus>,
    pub persistent: bool,
}

/// A point is persistent through horizon `K` when, for some `N <= ceil(K/2)` and all
/// `N <= k <= K`, it lies in `Base(f^k)` and not in `Base(f^{-k})`.
pub fn is_persistent(status: &[StepStatus], horizon: usize) -> bool {
    if horizon < 2 || status.len() < horizon {
        return false;
    }
    let good = |s: &StepStatus| s.in_forward_base == Some(true) && s.in_backward_base == Some(false);
    let latest_start = horizon.div_ceil(2);
    (1..=latest_start).any(|n| status[n - 1..horizon].iter().all(good))
}

pub fn persistence_records(t: &Tracker, horizon: usize) -> Vec<PersistenceRecord> {
    t.classes()
        .into_iter()
        .map(|members| {
            let mut best: Option<PersistenceRecord> = None;
            for &i in &members {
                let p = &t.base()[i];
                let status: Vec<StepStatus> = (1..=horizon)
                    .map(|k| StepStatus {
                        k,
                        in_forward_base: t.in_forward_base(p, k),
                        in_backward_base: t.in_backward_base(p, k),
                    })
                    .collect();
                let persistent = is_persistent(&status, horizon);
                let rec = PersistenceRecord {
                    members: members.clone(),
                    representative: p.to_json(),
                    orbit: t.p_layers.iter().map(|l| l[i].to_json()).collect(),
                    orbit_complete: t.p_complete.iter().map(|l| l[i]).collect(),
                    status,
                    persistent,
                };
                if best.is_none() || (persistent && !best.as_ref().unwrap().persistent) {
                    best = Some(rec);
                }
            }
            best.unwrap()
        })
        .collect()
}

pub fn persistent_classes(f: &Birational, horizon: usize) -> Result<Vec<PersistenceRecord>> {
    let t = Tracker::new(f, horizon)?;
    Ok(persistence_records(&t, horizon))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuEstimate {
    pub horizon: usize,
    /// Number of classes persistent through the horizon.
    pub lower_bound: usize,
    /// Set only when the value is certain (finite order or an automorphism).
    pub exact: Option<usize>,
    pub b_sequence: Vec<Option<usize>>,
    /// `b(f^K) - b(f^{K-1})` for the last two known entries.
    pub slope: Option<i64>,
    pub classes: Vec<PersistenceRecord>,
    pub collision: Option<Collision>,
    pub period: Option<usize>,
    pub diagnostics: Vec<String>,
}

pub fn mu_from_tracker(t: &Tracker, horizon: usize) -> MuEstimate {
    let classes = persistence_records(t, horizon);
    let lower_bound = classes.iter().filter(|c| c.persistent).count();
    let known: Vec<usize> = t.b.iter().map_while(|b| *b).collect();
    let slope = if known.len() >= 2 {
        Some(known[known.len() - 1] as i64 - known[known.len() - 2] as i64)
    } else {
        None
    };
    let exact = t.period.map(|_| 0);
    let mut diagnostics = t.diagnostics.clone();
    if !t.classes_determined() {
        diagnostics.push("some orbit points are known only up to a prefix; undecided classes were merged".into());
    }
    if horizon < 2 {
        diagnostics.push("horizon below 2: persistence cannot be certified".into());
    }
    MuEstimate {
        horizon,
        lower_bound,
        exact,
        b_sequence: t.b.clone(),
        slope,
        classes,
        collision: t.collision.clone(),
        period: t.period,
        diagnostics,
    }
}

pub fn mu_estimate(f: &Birational, horizon: usize) -> Result<MuEstimate> {
    let t = Tracker::new(f, horizon)?;
    Ok(mu_from_tracker(&t, horizon))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictLevel {
    RegularizableEvidence,
    NotRegularizableEvidence,
    Inconclusive,
}

impl VerdictLevel {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictLevel::RegularizableEvidence => "regularizable-evidence",
            VerdictLevel::NotRegularizableEvidence => "not-regularizable-evidence",
            VerdictLevel::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub level: VerdictLevel,
    pub justification: Vec<String>,
}

pub fn verdict_from_mu(mu: &MuEstimate) -> Verdict {
    let mut justification = Vec::new();
    let level = if mu.lower_bound >= 1 {
        for c in mu.classes.iter().filter(|c| c.persistent) {
            justification.push(format!(
                "persistent class of {} base point(s) represented by {} through horizon {}",
                c.members.len(),
                BubblePoint::from_json(&c.representative)
                    .map(|p| p.to_string())
                    .unwrap_or_default(),
                mu.horizon
            ));
        }
        VerdictLevel::NotRegularizableEvidence
    } else if mu.exact == Some(0) {
        match mu.period {
            Some(1) => justification.push("map is an automorphism (no base points)".into()),
            Some(p) => justification.push(format!("f^{} is an automorphism: b sequence is periodic", p)),
            None => {}
        }
        VerdictLevel::RegularizableEvidence
    } else {
        justification.push(format!(
            "no persistent class and no periodicity within horizon {}",
            mu.horizon
        ));
        VerdictLevel::Inconclusive
    };
    justification.extend(mu.diagnostics.iter().cloned());
    Verdict { level, justification }
}

pub fn regularizability_verdict(f: &Birational, horizon: usize) -> Result<Verdict> {
    Ok(verdict_from_mu(&mu_estimate(f, horizon)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugationReport {
    pub mu_original: usize,
    pub mu_conjugate: usize,
    pub holds: bool,
}

/// Compares `mu_estimate` of `f` and of `A∘f∘A⁻¹`.
pub fn conjugation_invariance_check(f: &Birational, a: &Automorphism, horizon: usize) -> Result<ConjugationReport> {
    let m0 = mu_estimate(f, horizon)?;
    let m1 = mu_estimate(&f.act(a, Side::Conjugate), horizon)?;
    let v0 = m0.exact.unwrap_or(m0.lower_bound);
    let v1 = m1.exact.unwrap_or(m1.lower_bound);
    Ok(ConjugationReport {
        mu_original: v0,
        mu_conjugate: v1,
        holds: v0 == v1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn psi() -> Birational {
        Birational::new(
            PlaneMap::parse("(x^2*y*z^2 - z^5 + x^5 : x^2*(x^2*y - z^3) : x*z*(x^2*y - z^3))").unwrap(),
        )
        .unwrap()
    }

    fn sigma() -> Birational {
        Birational::new(PlaneMap::parse("(y*z : x*z : x*y)").unwrap()).unwrap()
    }

    #[test]
    fn degree_sequences() {
        assert_eq!(degree_sequence(&sigma().map, 2, 700).unwrap(), vec![2, 1]);
        assert_eq!(degree_sequence(&psi().map, 2, 700).unwrap(), vec![5, 25]);
        assert_eq!(degree_sequence(&PlaneMap::identity(), 3, 700).unwrap(), vec![1, 1, 1]);
        assert!(matches!(
            degree_sequence(&psi().map, 3, 100),
            Err(Error::DegreeCapExceeded { .. })
        ));
    }

    #[test]
    fn involution_is_periodic() {
        let t = Tracker::new(&sigma(), 5).unwrap();
        assert_eq!(t.b, vec![Some(3), Some(0), Some(3), Some(0), Some(3)]);
        assert_eq!(t.period, Some(2));
        let c = t.collision.as_ref().unwrap();
        assert_eq!(c.step, 1);
        assert_eq!(c.base_points.len(), 3);
        let mu = mu_from_tracker(&t, 5);
        assert_eq!((mu.lower_bound, mu.exact), (0, Some(0)));
        assert_eq!(verdict_from_mu(&mu).level, VerdictLevel::RegularizableEvidence);
        assert_eq!(b_sequence_direct(&sigma().map, 2, 700).unwrap(), vec![3, 0]);
    }

    #[test]
    fn automorphisms_have_no_base_points() {
        let a = Automorphism::from_ints([[1, 2, 0], [0, 1, 5], [3, 0, 1]]).unwrap();
        let mu = mu_estimate(&Birational::automorphism(&a), 4).unwrap();
        assert_eq!(mu.b_sequence, vec![Some(0); 4]);
        assert_eq!(mu.exact, Some(0));
        let v = regularizability_verdict(&Birational::identity(), 3).unwrap();
        assert_eq!(v.level, VerdictLevel::RegularizableEvidence);
    }

    #[test]
    fn psi_tracked_orbits() {
        let t = Tracker::new(&psi(), 4).unwrap();
        assert_eq!(t.b, vec![Some(9), Some(18), Some(27), Some(36)]);
        assert!(t.collision.is_none());
        // the backward orbit of a base point gains one leading first:0 step each time
        let p3 = &t.base()[2];
        let img = &t.p_layers[1][2];
        assert_eq!(img.level(), p3.level() + 1);
        let mu = mu_from_tracker(&t, 4);
        assert!(mu.lower_bound >= 1);
        assert_eq!(verdict_from_mu(&mu).level, VerdictLevel::NotRegularizableEvidence);
    }

    #[test]
    fn persistence_window() {
        let st = |k, f, b| StepStatus {
            k,
            in_forward_base: Some(f),
            in_backward_base: Some(b),
        };
        let s = vec![st(1, true, true), st(2, true, false), st(3, true, false), st(4, true, false)];
        assert!(is_persistent(&s, 4));
        let s = vec![st(1, true, false), st(2, true, true), st(3, true, true), st(4, true, false)];
        assert!(!is_persistent(&s, 4));
        assert!(!is_persistent(&s[..1], 1));
    }
}
