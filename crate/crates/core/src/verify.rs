//! The replayable check suite: seventeen ordered checks, each timed and carrying
//! a JSON payload. A failing or panicking check never stops the run.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bubble::{base_point_tree, base_point_tree_unchecked, noether_check, BasePointTree, BubblePoint, ResolvedMap};
use crate::dynamics::{b_sequence_direct, degree_sequence, mu_estimate, mu_from_tracker, verdict_from_mu, MuEstimate, Tracker, VerdictLevel};
use crate::plane_map::{contracted_curves, inverse, is_birational, verify_inverse, Automorphism, Birational, PlaneMap, ProjPoint, Side};
use crate::registry;
use crate::{MultiPoly, Rational};

pub const CHECK_NAMES: [&str; 17] = [
    "psi-degree-and-indeterminacy",
    "psi-tree-single-chain",
    "psi-proximity-pattern",
    "inverse-proximity-pattern",
    "multiplicities-and-noether",
    "contracted-curves-of-psi",
    "contracted-curves-of-inverse",
    "base-point-counts",
    "tracked-equals-direct",
    "persistence-of-p3",
    "q3-never-a-base-point",
    "genericity-spot-check",
    "sextic-example",
    "shear-family",
    "control-group",
    "conjugation-invariance",
    "property-suite",
];

/// Horizon used by the checks that the default run performs at horizon 4.
const SHORT_HORIZON: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub horizon: usize,
    pub degree_cap: u64,
    pub property_instances: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 42,
            horizon: crate::dynamics::DEFAULT_PERSISTENCE_HORIZON,
            degree_cap: crate::plane_map::DEFAULT_DEGREE_CAP,
            property_instances: 100,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail { reason: String },
    Skipped { reason: String },
}

impl CheckStatus {
    pub fn label(&self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail { .. } => "fail",
            CheckStatus::Skipped { .. } => "skipped",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub index: usize,
    pub name: String,
    #[serde(flatten)]
    pub status: CheckStatus,
    pub seconds: f64,
    pub payload: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub horizon: usize,
    pub checks: Vec<CheckResult>,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub seconds: f64,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn summary(&self) -> String {
        format!(
            "{} checks: {} passed, {} failed, {} skipped ({:.1}s)",
            self.checks.len(),
            self.passed,
            self.failed,
            self.skipped,
            self.seconds
        )
    }

    pub fn to_table(&self) -> String {
        let mut s = format!("{:>3}  {:<30} {:<8} {:>8}  detail\n", "#", "check", "status", "time");
        for c in &self.checks {
            let detail = match &c.status {
                CheckStatus::Pass => String::new(),
                CheckStatus::Fail { reason } | CheckStatus::Skipped { reason } => reason.clone(),
            };
            s.push_str(&format!(
                "{:>3}  {:<30} {:<8} {:>7.2}s  {}\n",
                c.index,
                c.name,
                c.status.label(),
                c.seconds,
                detail
            ));
        }
        s.push_str(&self.summary());
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("index,name,status,seconds,reason\n");
        for c in &self.checks {
            let reason = match &c.status {
                CheckStatus::Pass => String::new(),
                CheckStatus::Fail { reason } | CheckStatus::Skipped { reason } => reason.replace('"', "'"),
            };
            s.push_str(&format!("{},{},{},{:.3},\"{}\"\n", c.index, c.name, c.status.label(), c.seconds, reason));
        }
        s
    }
}

/// Shared, lazily computed objects about the quintic example.
struct Context {
    opts: VerifyOptions,
    psi: OnceLock<Result<Birational, String>>,
    tree: OnceLock<Result<BasePointTree, String>>,
    inverse_tree: OnceLock<Result<BasePointTree, String>>,
    tracker: OnceLock<Result<Tracker, String>>,
}

type Check = std::result::Result<Value, Outcome>;

/// Early exit from a check.
enum Outcome {
    Fail(String, Value),
    Skip(String),
}

fn err<E: std::fmt::Display>(e: E) -> Outcome {
    Outcome::Fail(e.to_string(), Value::Null)
}

/// Collects expectations; failing ones become the failure reason.
struct Expect {
    failures: Vec<String>,
}

impl Expect {
    fn new() -> Self {
        Expect { failures: Vec::new() }
    }

    fn that(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn finish(self, payload: Value) -> Check {
        if self.failures.is_empty() {
            Ok(payload)
        } else {
            Err(Outcome::Fail(self.failures.join("; "), payload))
        }
    }
}

fn cached<'a, T>(cell: &'a OnceLock<Result<T, String>>, make: impl FnOnce() -> crate::Result<T>) -> std::result::Result<&'a T, Outcome> {
    cell.get_or_init(|| make().map_err(|e| e.to_string()))
        .as_ref()
        .map_err(|e| Outcome::Fail(e.clone(), Value::Null))
}

impl Context {
    fn psi(&self) -> std::result::Result<&Birational, Outcome> {
        cached(&self.psi, || Birational::new(PlaneMap::parse(registry::PSI)?))
    }

    fn tree(&self) -> std::result::Result<&BasePointTree, Outcome> {
        let psi = self.psi()?;
        cached(&self.tree, || base_point_tree(&psi.map))
    }

    fn inverse_tree(&self) -> std::result::Result<&BasePointTree, Outcome> {
        let psi = self.psi()?;
        cached(&self.inverse_tree, || base_point_tree(&psi.inverse))
    }

    /// Tracker through `max(horizon, 2)` with every orbit point resolved.
    fn tracker(&self) -> std::result::Result<&Tracker, Outcome> {
        let psi = self.psi()?;
        let (tree, inv) = (self.tree()?.clone(), self.inverse_tree()?.clone());
        let k = self.opts.horizon.max(2);
        cached(&self.tracker, || {
            let forward = ResolvedMap::from_parts(psi.map.clone(), tree);
            let backward = ResolvedMap::from_parts(psi.inverse.clone(), inv);
            let mut t = Tracker::from_resolved(forward, backward, k, crate::dynamics::DEFAULT_TRANSPORT_BUDGET)?;
            t.refine()?;
            Ok(t)
        })
    }

    fn require_horizon(&self) -> std::result::Result<(), Outcome> {
        if self.opts.horizon < 2 {
            Err(Outcome::Skip("horizon too small (persistence needs at least 2)".into()))
        } else {
            Ok(())
        }
    }

    fn short_horizon(&self) -> usize {
        self.opts.horizon.min(SHORT_HORIZON)
    }

    /// Automorphisms for the genericity (first five) and conjugation (last three) checks.
    fn automorphisms(&self) -> Vec<Automorphism> {
        registry::random_automorphisms(self.opts.seed, 8)
    }
}

pub fn run_verify(opts: &VerifyOptions) -> VerifyReport {
    run_verify_with(opts, |_| {})
}

/// Runs every check in order, calling `progress` after each one.
pub fn run_verify_with(opts: &VerifyOptions, mut progress: impl FnMut(&CheckResult)) -> VerifyReport {
    let start = Instant::now();
    let ctx = Context {
        opts: opts.clone(),
        psi: OnceLock::new(),
        tree: OnceLock::new(),
        inverse_tree: OnceLock::new(),
        tracker: OnceLock::new(),
    };
    let mut checks = Vec::with_capacity(CHECK_NAMES.len());
    for index in 1..=CHECK_NAMES.len() {
        let r = run_one(&ctx, index);
        progress(&r);
        checks.push(r);
    }
    let count = |l: &str| checks.iter().filter(|c| c.status.label() == l).count();
    VerifyReport {
        seed: opts.seed,
        horizon: opts.horizon,
        passed: count("pass"),
        failed: count("fail"),
        skipped: count("skipped"),
        checks,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Runs a single check (1-based index) with fresh shared state.
pub fn run_check(opts: &VerifyOptions, index: usize) -> CheckResult {
    let ctx = Context {
        opts: opts.clone(),
        psi: OnceLock::new(),
        tree: OnceLock::new(),
        inverse_tree: OnceLock::new(),
        tracker: OnceLock::new(),
    };
    run_one(&ctx, index)
}

fn run_one(ctx: &Context, index: usize) -> CheckResult {
    let t0 = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(|| match index {
        1 => check_psi_parse(ctx),
        2 => check_tree_chain(ctx),
        3 => check_proximity(ctx),
        4 => check_inverse_proximity(ctx),
        5 => check_multiplicities(ctx),
        6 => check_contracted(ctx, false),
        7 => check_contracted(ctx, true),
        8 => check_b_counts(ctx),
        9 => check_tracked_direct(ctx),
        10 => check_persistence(ctx),
        11 => check_q3(ctx),
        12 => check_genericity(ctx),
        13 => check_sextic(ctx),
        14 => check_family(ctx),
        15 => check_control(ctx),
        16 => check_conjugation(ctx),
        17 => check_properties(ctx),
        _ => Err(Outcome::Skip(format!("no check numbered {}", index))),
    }));
    let (status, payload) = match outcome {
        Ok(Ok(p)) => (CheckStatus::Pass, p),
        Ok(Err(Outcome::Fail(reason, p))) => (CheckStatus::Fail { reason }, p),
        Ok(Err(Outcome::Skip(reason))) => (CheckStatus::Skipped { reason }, Value::Null),
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            (CheckStatus::Fail { reason: format!("panicked: {}", msg) }, Value::Null)
        }
    };
    CheckResult {
        index,
        name: CHECK_NAMES.get(index - 1).unwrap_or(&"unknown").to_string(),
        status,
        seconds: t0.elapsed().as_secs_f64(),
        payload,
    }
}

fn check_psi_parse(ctx: &Context) -> Check {
    let f = PlaneMap::parse(registry::PSI).map_err(err)?;
    let ind = crate::bubble::proper_base_points(&f).map_err(err)?;
    let pts: Vec<ProjPoint> = ind.iter().map(|(p, _)| p.clone()).collect();
    let mut e = Expect::new();
    e.that(f.degree() == 5, format!("degree {} instead of 5", f.degree()));
    e.that(
        pts == vec![ProjPoint::from_ints([0, 1, 0]).unwrap()],
        format!("indeterminacy set {:?}", pts.iter().map(|p| p.to_string()).collect::<Vec<_>>()),
    );
    // the parsed map is the one every later check uses
    e.that(ctx.psi()?.map == f, "cached map differs from the parsed one");
    e.finish(json!({
        "map": f.to_string(),
        "degree": f.degree(),
        "indeterminacy": ind.iter().map(|(p, m)| json!({"point": p.to_string(), "multiplicity": m})).collect::<Vec<_>>(),
    }))
}

fn check_tree_chain(ctx: &Context) -> Check {
    let tree = ctx.tree()?;
    let p1 = ProjPoint::from_ints([0, 1, 0]).unwrap();
    let mut e = Expect::new();
    e.that(tree.len() == 9, format!("{} nodes instead of 9", tree.len()));
    e.that(tree.is_single_chain(), "tree is not a single chain");
    e.that(tree.points().all(|p| p.anchor == p1), "a node lies over another proper point");
    for (i, n) in tree.nodes.iter().enumerate() {
        e.that(n.point.level() == i, format!("node {} is at level {}", i + 1, n.point.level()));
    }
    e.finish(serde_json::to_value(tree.to_json("p")).unwrap())
}

fn proximity_payload(tree: &BasePointTree, prefix: &str) -> Value {
    json!({
        "proximate_to": tree.nodes.iter().enumerate().map(|(i, n)| json!({
            "node": format!("{}{}", prefix, i + 1),
            "proximate_to": n.proximate_to.iter().map(|j| format!("{}{}", prefix, j + 1)).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "satellite_edges": tree.satellite_edges().iter().map(|(a, b)| format!("{}{}->{}{}", prefix, a + 1, prefix, b + 1)).collect::<Vec<_>>(),
    })
}

fn check_proximity(ctx: &Context) -> Check {
    let tree = ctx.tree()?;
    let mut e = Expect::new();
    for (i, n) in tree.nodes.iter().enumerate().skip(1) {
        e.that(n.proximate_to.contains(&(i - 1)), format!("p{} not proximate to p{}", i + 1, i));
    }
    e.that(
        tree.satellite_edges() == vec![(2, 0)],
        format!("satellite edges {:?} instead of only p3->p1", tree.satellite_edges()),
    );
    e.finish(proximity_payload(tree, "p"))
}

fn check_inverse_proximity(ctx: &Context) -> Check {
    let tree = ctx.inverse_tree()?;
    let mut e = Expect::new();
    e.that(tree.len() == 9, format!("{} nodes instead of 9", tree.len()));
    e.that(tree.is_single_chain(), "tree is not a single chain");
    e.that(tree.satellite_edges().is_empty(), format!("satellite edges {:?}", tree.satellite_edges()));
    e.that(
        tree.nodes.get(2).map(|n| n.proximate_to.clone()) == Some(vec![1]),
        "q3 is not proximate to q2 alone",
    );
    e.finish(proximity_payload(tree, "q"))
}

fn check_multiplicities(ctx: &Context) -> Check {
    let tree = ctx.tree()?;
    let m = tree.multiplicities();
    let report = noether_check(tree);
    let sum: u32 = m.iter().sum();
    let sum_sq: u32 = m.iter().map(|x| x * x).sum();
    let mut e = Expect::new();
    e.that(m == vec![4, 1, 1, 1, 1, 1, 1, 1, 1], format!("multiplicities {:?}", m));
    e.that(sum == 12 && sum_sq == 24, format!("sums {} and {}", sum, sum_sq));
    e.that(report.passed(), "Noether equalities or proximity inequalities fail");
    e.finish(json!({"multiplicities": m, "sum": sum, "sum_of_squares": sum_sq, "noether": report}))
}

/// Curves as monic polynomials, for comparison up to scalars.
fn curve_set(polys: impl IntoIterator<Item = MultiPoly>) -> BTreeSet<String> {
    polys.into_iter().map(|p| p.monic().to_string()).collect()
}

fn check_contracted(ctx: &Context, inverse_side: bool) -> Check {
    let psi = ctx.psi()?;
    let (map, expected, image) = if inverse_side {
        (&psi.inverse, ["y", "z^2 - x*y"], None)
    } else {
        (&psi.map, ["x", "x^2*y - z^3"], Some(ProjPoint::from_ints([1, 0, 0]).unwrap()))
    };
    let curves = contracted_curves(map).map_err(err)?;
    let want = curve_set(expected.iter().map(|s| crate::algebra::parse_poly(s).unwrap()));
    let got = curve_set(curves.iter().map(|c| c.polynomial.clone()));
    let mut e = Expect::new();
    e.that(got == want, format!("contracted curves {:?}", got));
    if let Some(img) = &image {
        for c in &curves {
            e.that(&c.image == img, format!("{} goes to {}", c.polynomial, c.image));
        }
    }
    e.finish(json!({
        "curves": curves.iter().map(|c| json!({"curve": c.polynomial.monic().to_string(), "image": c.image.to_string()})).collect::<Vec<_>>(),
    }))
}

fn check_b_counts(ctx: &Context) -> Check {
    let (a, b) = (ctx.tree()?.len(), ctx.inverse_tree()?.len());
    let mut e = Expect::new();
    e.that(a == 9 && b == 9, format!("b = {} and {}", a, b));
    e.finish(json!({"b": a, "b_inverse": b}))
}

fn check_tracked_direct(ctx: &Context) -> Check {
    let psi = ctx.psi()?;
    let t = ctx.tracker()?;
    let direct = b_sequence_direct(&psi.map, 2, ctx.opts.degree_cap).map_err(err)?;
    let square = psi.map.compose_capped(&psi.map, ctx.opts.degree_cap).map_err(err)?;
    let square_tree = base_point_tree(&square).map_err(err)?;
    let tracked: Vec<Option<usize>> = t.b.iter().take(2).copied().collect();
    let mut e = Expect::new();
    e.that(
        tracked == direct.iter().map(|&b| Some(b)).collect::<Vec<_>>(),
        format!("tracked {:?} but direct {:?}", tracked, direct),
    );
    // the sets themselves, not only their sizes
    let direct_set: BTreeSet<BubblePoint> = square_tree.points().cloned().collect();
    e.that(t.forward_base(2).as_ref() == Some(&direct_set), "tracked Base(f^2) differs from the direct tree");
    let first: BTreeSet<BubblePoint> = ctx.tree()?.points().cloned().collect();
    e.that(t.forward_base(1).as_ref() == Some(&first), "tracked Base(f) differs from the direct tree");
    e.finish(json!({"tracked": tracked, "direct": direct}))
}

fn check_persistence(ctx: &Context) -> Check {
    ctx.require_horizon()?;
    let h = ctx.opts.horizon;
    let t = ctx.tracker()?;
    let p3 = ctx.tree()?.nodes[2].point.clone();
    let mut e = Expect::new();
    let mut rows = Vec::new();
    for i in 1..=h {
        let (fw, bw) = (t.in_forward_base(&p3, i), t.in_backward_base(&p3, i));
        e.that(fw == Some(true), format!("p3 in Base(f^{}) is {:?}", i, fw));
        e.that(bw == Some(false), format!("p3 in Base(f^-{}) is {:?}", i, bw));
        rows.push(json!({"i": i, "in_forward_base": fw, "in_backward_base": bw}));
    }
    // independent confirmation from the trees of the squares
    let psi = ctx.psi()?;
    let cap = ctx.opts.degree_cap;
    let fwd2 = base_point_tree(&psi.map.compose_capped(&psi.map, cap).map_err(err)?).map_err(err)?;
    let bwd2 = base_point_tree(&psi.inverse.compose_capped(&psi.inverse, cap).map_err(err)?).map_err(err)?;
    e.that(fwd2.contains(&p3) && !bwd2.contains(&p3), "direct trees of the squares disagree");
    // recorded, not asserted: first k with p1 in Base(f^-k), if any within the horizon
    let p1 = ctx.tree()?.nodes[0].point.clone();
    let p1_return = (1..=h).find(|&k| t.in_backward_base(&p1, k) == Some(true));
    let mu = mu_from_tracker(t, h);
    let verdict = verdict_from_mu(&mu);
    e.that(mu.lower_bound >= 1, format!("mu lower bound {}", mu.lower_bound));
    e.that(
        verdict.level == VerdictLevel::NotRegularizableEvidence,
        format!("verdict {}", verdict.level.as_str()),
    );
    e.finish(json!({
        "point": p3.to_string(),
        "steps": rows,
        "p1_first_in_inverse_base": p1_return,
        "mu_lower_bound": mu.lower_bound,
        "b_sequence": mu.b_sequence,
        "verdict": verdict.level.as_str(),
    }))
}

fn check_q3(ctx: &Context) -> Check {
    let h = ctx.opts.horizon.max(1);
    let t = ctx.tracker()?;
    let q3 = ctx.inverse_tree()?.nodes[2].point.clone();
    let mut e = Expect::new();
    let mut rows = Vec::new();
    for i in 1..=h {
        let fw = t.in_forward_base(&q3, i);
        e.that(fw == Some(false), format!("q3 in Base(f^{}) is {:?}", i, fw));
        rows.push(json!({"i": i, "in_forward_base": fw}));
    }
    e.finish(json!({"point": q3.to_string(), "steps": rows}))
}

fn mu_payload(mu: &MuEstimate) -> Value {
    json!({
        "horizon": mu.horizon,
        "lower_bound": mu.lower_bound,
        "exact": mu.exact,
        "b_sequence": mu.b_sequence,
        "period": mu.period,
    })
}

fn check_genericity(ctx: &Context) -> Check {
    ctx.require_horizon()?;
    let psi = ctx.psi()?;
    let h = ctx.short_horizon();
    let mut e = Expect::new();
    let mut rows = Vec::new();
    for (i, a) in ctx.automorphisms().iter().take(5).enumerate() {
        let f = psi.act(a, Side::Left);
        let degs = degree_sequence(&f.map, 2, ctx.opts.degree_cap).map_err(err)?;
        e.that(degs == vec![5, 25], format!("A{}: degrees {:?}", i + 1, degs));
        let mu = mu_estimate(&f, h).map_err(err)?;
        e.that(mu.lower_bound >= 1, format!("A{}: mu lower bound {}", i + 1, mu.lower_bound));
        rows.push(json!({"automorphism": a.to_string(), "degrees": degs, "mu": mu_payload(&mu)}));
    }
    e.finish(json!({"horizon": h, "instances": rows}))
}

fn check_sextic(ctx: &Context) -> Check {
    ctx.require_horizon()?;
    let h = ctx.short_horizon();
    let f = PlaneMap::parse(registry::CHI).map_err(err)?;
    let composite = registry::chi_np(2, 3).map_err(err)?;
    let mut e = Expect::new();
    e.that(f.degree() == 6, format!("degree {}", f.degree()));
    e.that(is_birational(&f), "not birational");
    e.that(composite.map == f, "differs from the composite of the two shears");
    e.that(
        registry::shear_x(2).map_err(err)?.map == PlaneMap::parse("(x*z + y^2 : y*z : z^2)").unwrap()
            && registry::shear_y(3).map_err(err)?.map == PlaneMap::parse("(x*z^2 : y*z^2 + x^3 : z^3)").unwrap(),
        "shears homogenize differently",
    );
    let mu = mu_estimate(&Birational::from_pair(f.clone(), composite.inverse.clone()).map_err(err)?, h).map_err(err)?;
    e.that(mu.lower_bound >= 1, format!("mu lower bound {}", mu.lower_bound));
    e.finish(json!({"map": f.to_string(), "degree": f.degree(), "mu": mu_payload(&mu)}))
}

fn check_family(ctx: &Context) -> Check {
    ctx.require_horizon()?;
    let h = ctx.short_horizon();
    let mut e = Expect::new();
    let mut rows = Vec::new();
    for (n, p) in [(2u32, 3u32), (2, 2), (3, 2)] {
        let f = registry::chi_np(n, p).map_err(err)?;
        let bir = is_birational(&f.map);
        e.that(bir, format!("chi_{}{} not birational", n, p));
        e.that(f.degree() == n * p, format!("chi_{}{} has degree {}", n, p, f.degree()));
        let mu = mu_estimate(&f, h).map_err(err)?;
        e.that(mu.lower_bound >= 1, format!("chi_{}{}: mu lower bound {}", n, p, mu.lower_bound));
        rows.push(json!({"n": n, "p": p, "degree": f.degree(), "birational": bir, "mu": mu_payload(&mu)}));
    }
    e.finish(json!({"horizon": h, "family": rows}))
}

fn check_control(ctx: &Context) -> Check {
    let h = ctx.opts.horizon.max(2);
    let s = registry::sigma();
    let mut e = Expect::new();
    let square = s.map.compose_capped(&s.map, ctx.opts.degree_cap).map_err(err)?;
    e.that(square.is_identity(), "sigma^2 is not the identity");
    let b = b_sequence_direct(&s.map, 2, ctx.opts.degree_cap).map_err(err)?;
    e.that(b == vec![3, 0], format!("b sequence {:?}", b));
    let mu = mu_estimate(&s, h).map_err(err)?;
    let verdict = verdict_from_mu(&mu);
    e.that(mu.exact == Some(0) && mu.lower_bound == 0, format!("mu {:?}/{}", mu.exact, mu.lower_bound));
    e.that(verdict.level == VerdictLevel::RegularizableEvidence, format!("verdict {}", verdict.level.as_str()));
    let mut linear = vec![Birational::identity()];
    linear.extend(ctx.automorphisms().iter().take(3).map(Birational::automorphism));
    for (i, a) in linear.iter().enumerate() {
        let m = mu_estimate(a, h).map_err(err)?;
        e.that(m.exact == Some(0), format!("degree-1 map {}: mu {:?}", i, m.exact));
    }
    e.finish(json!({"b_sequence": b, "mu": mu_payload(&mu), "verdict": verdict.level.as_str(), "linear_maps": linear.len()}))
}

fn check_conjugation(ctx: &Context) -> Check {
    ctx.require_horizon()?;
    let h = ctx.opts.horizon;
    let psi = ctx.psi()?;
    let base_mu = mu_from_tracker(ctx.tracker()?, h);
    let base_b = b_sequence_direct(&psi.map, 2, ctx.opts.degree_cap).map_err(err)?;
    let mut e = Expect::new();
    let mut rows = Vec::new();
    for (i, a) in ctx.automorphisms().iter().skip(5).enumerate() {
        let f = psi.act(a, Side::Conjugate);
        let mu = mu_estimate(&f, h).map_err(err)?;
        e.that(
            mu.lower_bound == base_mu.lower_bound && mu.exact == base_mu.exact,
            format!("A{}: mu {} against {}", i + 1, mu.lower_bound, base_mu.lower_bound),
        );
        let b = b_sequence_direct(&f.map, 2, ctx.opts.degree_cap).map_err(err)?;
        e.that(b == base_b, format!("A{}: b {:?} against {:?}", i + 1, b, base_b));
        rows.push(json!({"automorphism": a.to_string(), "mu": mu_payload(&mu), "b_direct": b}));
    }
    e.finish(json!({"horizon": h, "mu_original": base_mu.lower_bound, "b_original": base_b, "instances": rows}))
}

/// Invertible integer matrix with entries in [-3, 3]; small heights keep the
/// composites cheap while their base points stay in general position.
fn small_automorphism(rng: &mut ChaCha8Rng) -> Automorphism {
    loop {
        let m = [0; 3].map(|_| [0; 3].map(|_| rng.gen_range(-3i64..=3)));
        if let Ok(a) = Automorphism::from_ints(m) {
            return a;
        }
    }
}

/// Degree-1 or degree-2 maps with known inverses, in general position.
fn random_generator(rng: &mut ChaCha8Rng) -> Birational {
    let a = small_automorphism(rng);
    let b = small_automorphism(rng);
    let core = match rng.gen_range(0..5) {
        0 => return Birational::automorphism(&a),
        1 | 2 => registry::sigma(),
        3 => registry::shear_x(2).unwrap(),
        _ => registry::shear_y(2).unwrap(),
    };
    core.act(&b, Side::Right).act(&a, Side::Left)
}

fn small_point(rng: &mut ChaCha8Rng) -> ProjPoint {
    loop {
        let c = [rng.gen_range(-6..=6), rng.gen_range(-6..=6), rng.gen_range(-6..=6)];
        if let Ok(p) = ProjPoint::from_ints(c) {
            return p;
        }
    }
}

/// A rational point on a contracted line of `g` when there is one, else a random point.
fn test_point(rng: &mut ChaCha8Rng, g: &PlaneMap) -> ProjPoint {
    if rng.gen_bool(0.5) {
        if let Ok(curves) = contracted_curves(g) {
            let lines: Vec<&MultiPoly> = curves.iter().map(|c| &c.polynomial).filter(|p| p.total_degree() == Some(1)).collect();
            if !lines.is_empty() {
                let l = lines[rng.gen_range(0..lines.len())];
                let c = [0, 1, 2].map(|i| l.coeff(&crate::algebra::Monomial::var(i)));
                // two points spanning the line, combined with small weights
                let u = small_point(rng);
                let cross = |p: [Rational; 3], q: &[Rational; 3]| {
                    [
                        &p[1] * &q[2] - &p[2] * &q[1],
                        &p[2] * &q[0] - &p[0] * &q[2],
                        &p[0] * &q[1] - &p[1] * &q[0],
                    ]
                };
                let v = cross(c.clone(), u.coords());
                if let Ok(p) = ProjPoint::new(v) {
                    return p;
                }
            }
        }
    }
    small_point(rng)
}

#[derive(Default, Serialize)]
struct PropertyTally {
    instances: usize,
    trees: usize,
    subadditivity_b: usize,
    subadditivity_degree: usize,
    noether: usize,
    round_trips: usize,
    interpolated_inverses: usize,
    functoriality: usize,
    infinitely_near_images: usize,
}

fn check_properties(ctx: &Context) -> Check {
    let n = ctx.opts.property_instances.max(100);
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.opts.seed ^ 0x9e37_79b9_7f4a_7c15);
    let cap = ctx.opts.degree_cap;
    let mut tally = PropertyTally::default();
    let mut failures: Vec<String> = Vec::new();
    for i in 0..n {
        let f = random_generator(&mut rng);
        let g = random_generator(&mut rng);
        let fail = |failures: &mut Vec<String>, what: String| failures.push(format!("instance {}: {}", i, what));
        let fg = match f.compose(&g, cap) {
            Ok(x) => x,
            Err(e) => {
                fail(&mut failures, format!("compose: {}", e));
                continue;
            }
        };
        tally.instances += 1;

        let mut trees = Vec::new();
        for (label, m) in [("f", &f.map), ("g", &g.map), ("fg", &fg.map)] {
            match base_point_tree_unchecked(m) {
                Ok(t) => {
                    tally.trees += 1;
                    let r = noether_check(&t);
                    if r.passed() {
                        tally.noether += 1;
                    } else {
                        fail(&mut failures, format!("{}: Noether/proximity {:?}", label, r));
                    }
                    trees.push(t);
                }
                Err(e) => fail(&mut failures, format!("{}: tree: {}", label, e)),
            }
        }
        if fg.degree() <= f.degree() * g.degree() {
            tally.subadditivity_degree += 1;
        } else {
            fail(&mut failures, format!("deg {} > {}*{}", fg.degree(), f.degree(), g.degree()));
        }
        if trees.len() == 3 {
            if trees[2].len() <= trees[0].len() + trees[1].len() {
                tally.subadditivity_b += 1;
            } else {
                fail(&mut failures, format!("b {} > {}+{}", trees[2].len(), trees[0].len(), trees[1].len()));
            }
        }

        if verify_inverse(&fg.map, &fg.inverse) {
            tally.round_trips += 1;
        } else {
            fail(&mut failures, "composite inverse does not round-trip".into());
        }
        match inverse(&fg.map) {
            Ok(h) if h == fg.inverse => tally.interpolated_inverses += 1,
            Ok(h) => fail(&mut failures, format!("interpolated inverse {} differs", h)),
            Err(e) => fail(&mut failures, format!("interpolation: {}", e)),
        }

        if trees.len() == 3 {
            let rf = ResolvedMap::from_parts(f.map.clone(), trees[0].clone());
            let rg = ResolvedMap::from_parts(g.map.clone(), trees[1].clone());
            let rfg = ResolvedMap::from_parts(fg.map.clone(), trees[2].clone());
            let mut done = false;
            for _ in 0..8 {
                let p = BubblePoint::proper(test_point(&mut rng, &g.map));
                if rg.is_base_point(&p) || rfg.is_base_point(&p) {
                    continue;
                }
                let mid = match rg.push_forward(&p) {
                    Ok(m) => m,
                    Err(e) => {
                        fail(&mut failures, format!("g push-forward of {}: {}", p, e));
                        done = true;
                        break;
                    }
                };
                if rf.is_base_point(&mid) {
                    continue;
                }
                let stepwise = rf.push_forward(&mid);
                let direct = rfg.push_forward(&p);
                match (direct, stepwise) {
                    (Ok(d), Ok(s)) if d == s => {
                        tally.functoriality += 1;
                        if !d.is_proper() {
                            tally.infinitely_near_images += 1;
                        }
                    }
                    (Ok(d), Ok(s)) => fail(&mut failures, format!("at {}: direct {} but stepwise {}", p, d, s)),
                    (d, s) => fail(&mut failures, format!("push-forward at {}: {:?} / {:?}", p, d.err(), s.err())),
                }
                done = true;
                break;
            }
            if !done {
                // every sample hit a base point; count it as vacuous, not as a pass
                fail(&mut failures, "no admissible point for functoriality".into());
            }
        }
    }
    let payload = json!({"tally": tally, "failures": failures.iter().take(10).collect::<Vec<_>>()});
    let mut e = Expect::new();
    e.that(tally.instances >= 100, format!("only {} instances", tally.instances));
    e.that(failures.is_empty(), format!("{} failures, first: {}", failures.len(), failures.first().cloned().unwrap_or_default()));
    e.finish(payload)
}
