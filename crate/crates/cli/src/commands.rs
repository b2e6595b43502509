use serde_json::{json, Value};

use cremona_core::algebra::squarefree_decomposition;
use cremona_core::bubble::{base_point_tree, noether_check, BasePointTree};
use cremona_core::dynamics::{iteration_report, mu_estimate, verdict_from_mu, ReportOptions, VerdictLevel, DEFAULT_PERSISTENCE_HORIZON};
use cremona_core::plane_map::contracted_curves_report;
use cremona_core::registry::{self, Params};
use cremona_core::verify::{run_verify_with, VerifyOptions};
use cremona_core::{Birational, PlaneMap, ProjPoint};

use crate::{status, Cli, Command, Failure, Format, MapAction};

pub struct Output {
    pub text: String,
    pub code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: status::OK }
    }
}

type Run = Result<Output, Failure>;

pub fn run(cli: &Cli) -> Run {
    match &cli.command {
        Command::Map { action } => map(cli, action),
        Command::Basepoints => basepoints(cli),
        Command::Mu => mu(cli),
        Command::Degrees => degrees(cli),
        Command::VerifyPaper => verify(cli),
    }
}

fn params(cli: &Cli) -> Params {
    Params {
        n: cli.n,
        p: cli.p,
        seed: cli.seed,
    }
}

fn single(cli: &Cli) -> Result<&str, Failure> {
    match cli.maps.as_slice() {
        [m] => Ok(m),
        [] => Err(Failure::Usage("missing --map".into())),
        _ => Err(Failure::Usage("this command takes a single --map".into())),
    }
}

fn plane_map(cli: &Cli, name: &str) -> Result<PlaneMap, Failure> {
    Ok(registry::lookup_map(name, &params(cli))?)
}

fn birational(cli: &Cli, name: &str) -> Result<Birational, Failure> {
    Ok(registry::lookup(name, &params(cli))?)
}

fn unsupported(cli: &Cli) -> Failure {
    Failure::Usage(format!("format {:?} is not available for this command", cli.format).to_lowercase())
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn map_json(name: &str, f: &PlaneMap) -> Value {
    json!({"name": name, "map": f.to_string(), "degree": f.degree(), "components": f.to_json().components})
}

/// Table or JSON for commands whose result is a single map.
fn emit_map(cli: &Cli, name: &str, f: &PlaneMap) -> Run {
    match cli.format {
        Format::Table => Ok(Output::ok(format!("{}\n", f))),
        Format::Json => Ok(Output::ok(pretty(&map_json(name, f)))),
        _ => Err(unsupported(cli)),
    }
}

fn map(cli: &Cli, action: &MapAction) -> Run {
    match action {
        MapAction::Show => {
            let name = single(cli)?;
            emit_map(cli, name, &plane_map(cli, name)?)
        }
        MapAction::Compose => {
            if cli.maps.is_empty() {
                return Err(Failure::Usage("compose needs at least one --map".into()));
            }
            let mut acc: Option<PlaneMap> = None;
            for name in cli.maps.iter().rev() {
                let f = plane_map(cli, name)?;
                acc = Some(match acc {
                    None => f,
                    Some(inner) => f.compose_capped(&inner, cli.degree_cap)?,
                });
            }
            emit_map(cli, &cli.maps.join(" o "), &acc.unwrap())
        }
        MapAction::Inverse => {
            let name = single(cli)?;
            emit_map(cli, &format!("{}^-1", name), &birational(cli, name)?.inverse)
        }
        MapAction::Eval { point } => {
            let name = single(cli)?;
            let f = plane_map(cli, name)?;
            let p = ProjPoint::parse(point)?;
            let image = f.evaluate(&p).ok();
            match cli.format {
                Format::Table => Ok(Output::ok(match &image {
                    Some(q) => format!("{}\n", q),
                    None => "indeterminate (base point)\n".into(),
                })),
                Format::Json => Ok(Output::ok(pretty(&json!({
                    "point": p.to_string(),
                    "image": image.as_ref().map(|q| q.to_string()),
                    "indeterminate": image.is_none(),
                })))),
                _ => Err(unsupported(cli)),
            }
        }
        MapAction::Jacobian => {
            let name = single(cli)?;
            let j = plane_map(cli, name)?.jacobian()?;
            let factors: Vec<(String, u32)> = squarefree_decomposition(&j)
                .into_iter()
                .map(|(p, e)| (p.to_string(), e))
                .collect();
            match cli.format {
                Format::Table => {
                    let mut s = format!("{}\n", j);
                    for (p, e) in &factors {
                        s.push_str(&format!("  factor ({})^{}\n", p, e));
                    }
                    Ok(Output::ok(s))
                }
                Format::Json => Ok(Output::ok(pretty(&json!({
                    "jacobian": j.to_string(),
                    "degree": j.total_degree(),
                    "squarefree_factors": factors.iter().map(|(p, e)| json!({"factor": p, "multiplicity": e})).collect::<Vec<_>>(),
                })))),
                _ => Err(unsupported(cli)),
            }
        }
        MapAction::Contracted => {
            let name = single(cli)?;
            let r = contracted_curves_report(&plane_map(cli, name)?)?;
            let curves: Vec<(String, String)> = r
                .curves
                .iter()
                .map(|c| (c.polynomial.monic().to_string(), c.image.to_string()))
                .collect();
            let unsplit: Vec<(String, Option<String>)> = r
                .unsplit
                .iter()
                .map(|(h, img)| (h.to_string(), img.as_ref().map(|p| p.to_string())))
                .collect();
            match cli.format {
                Format::Table => {
                    let mut s = String::new();
                    for (c, img) in &curves {
                        s.push_str(&format!("{} = 0  ->  {}\n", c, img));
                    }
                    for (h, img) in &unsplit {
                        let img = img.as_deref().unwrap_or("not contracted");
                        s.push_str(&format!("{} = 0 (irreducibility unknown)  ->  {}\n", h, img));
                    }
                    if s.is_empty() {
                        s.push_str("no contracted curves\n");
                    }
                    Ok(Output::ok(s))
                }
                Format::Json => Ok(Output::ok(pretty(&json!({
                    "curves": curves.iter().map(|(c, i)| json!({"curve": c, "image": i})).collect::<Vec<_>>(),
                    "unsplit": unsplit.iter().map(|(c, i)| json!({"factor": c, "image": i})).collect::<Vec<_>>(),
                })))),
                _ => Err(unsupported(cli)),
            }
        }
    }
}

fn basepoints(cli: &Cli) -> Run {
    let name = single(cli)?;
    let f = plane_map(cli, name)?;
    let tree = base_point_tree(&f)?;
    let noether = noether_check(&tree);
    let label = |i: usize| format!("p{}", i + 1);
    let proximate = |t: &BasePointTree, i: usize| -> String {
        let v: Vec<String> = t.nodes[i].proximate_to.iter().map(|&j| label(j)).collect();
        if v.is_empty() {
            "-".into()
        } else {
            v.join(" ")
        }
    };
    let text = match cli.format {
        Format::Table => {
            let mut s = format!("map {} of degree {}\n", f, f.degree());
            if tree.is_empty() {
                s.push_str("no base points\n");
            } else {
                s.push_str(&format!("{:<5} {:>5} {:>4}  {:<14} {}\n", "node", "level", "mult", "proximate to", "point"));
                for (i, n) in tree.nodes.iter().enumerate() {
                    s.push_str(&format!(
                        "{:<5} {:>5} {:>4}  {:<14} {}\n",
                        label(i),
                        n.point.level(),
                        n.multiplicity,
                        proximate(&tree, i),
                        n.point
                    ));
                }
                let sats: Vec<String> = tree
                    .satellite_edges()
                    .iter()
                    .map(|&(a, b)| format!("{} -> {}", label(a), label(b)))
                    .collect();
                if !sats.is_empty() {
                    s.push_str(&format!("satellite edges: {}\n", sats.join(", ")));
                }
            }
            s.push_str(&format!(
                "b = {}; sum m = {} (3(d-1) = {}), sum m^2 = {} (d^2-1 = {})\n",
                tree.len(),
                noether.sum,
                noether.expected_sum,
                noether.sum_sq,
                noether.expected_sum_sq
            ));
            s
        }
        Format::Json => pretty(&json!({
            "map": f.to_string(),
            "b": tree.len(),
            "tree": tree.to_json("p"),
            "noether": noether,
        })),
        Format::Dot => tree.to_dot("p"),
        Format::Csv => {
            let mut s = String::from("node,anchor,tower,level,multiplicity,proximate_to\n");
            for (i, n) in tree.nodes.iter().enumerate() {
                let tower: Vec<String> = n.point.tower.iter().map(|t| t.to_string()).collect();
                s.push_str(&format!(
                    "{},\"{}\",\"{}\",{},{},\"{}\"\n",
                    label(i),
                    n.point.anchor,
                    tower.join(" > "),
                    n.point.level(),
                    n.multiplicity,
                    proximate(&tree, i)
                ));
            }
            s
        }
    };
    Ok(Output::ok(text))
}

fn mu(cli: &Cli) -> Run {
    let name = single(cli)?;
    let f = birational(cli, name)?;
    let horizon = cli.horizon.unwrap_or(DEFAULT_PERSISTENCE_HORIZON);
    let est = mu_estimate(&f, horizon)?;
    let verdict = verdict_from_mu(&est);
    let code = if verdict.level == VerdictLevel::Inconclusive {
        status::INCONCLUSIVE
    } else {
        status::OK
    };
    let text = match cli.format {
        Format::Table => {
            let b: Vec<String> = est
                .b_sequence
                .iter()
                .map(|b| b.map(|v| v.to_string()).unwrap_or_else(|| "?".into()))
                .collect();
            let value = match est.exact {
                Some(m) => format!("mu = {}", m),
                None => format!("mu >= {} (persistent classes through horizon {})", est.lower_bound, horizon),
            };
            let mut s = format!("map {}\nb sequence: {}\n{}\nverdict: {}\n", f.map, b.join(" "), value, verdict.level.as_str());
            for j in &verdict.justification {
                s.push_str(&format!("  {}\n", j));
            }
            s
        }
        Format::Json => pretty(&json!({"map": f.map.to_string(), "mu": est, "verdict": verdict})),
        Format::Csv => {
            let mut s = String::from("k,b\n");
            for (i, b) in est.b_sequence.iter().enumerate() {
                s.push_str(&format!("{},{}\n", i + 1, b.map(|v| v.to_string()).unwrap_or_default()));
            }
            s
        }
        Format::Dot => return Err(unsupported(cli)),
    };
    Ok(Output { text, code })
}

fn degrees(cli: &Cli) -> Run {
    let name = single(cli)?;
    let f = birational(cli, name)?;
    let mut opts = ReportOptions {
        degree_cap: cli.degree_cap,
        ..ReportOptions::default()
    };
    if let Some(h) = cli.horizon {
        opts.degree_horizon = h;
        opts.tracked_horizon = h;
        opts.persistence_horizon = h;
    }
    let r = iteration_report(name, &f, &opts)?;
    let code = if r.inconsistencies.is_empty() {
        status::OK
    } else {
        status::INCONSISTENT
    };
    let text = match cli.format {
        Format::Table => {
            let mut s = format!("map {}\n{:>3} {:>8} {:>6}  {}\n", f.map, "k", "degree", "b", "method");
            for line in r.to_csv().lines().skip(1) {
                let cells: Vec<&str> = line.split(',').collect();
                s.push_str(&format!("{:>3} {:>8} {:>6}  {}\n", cells[0], cells[1], cells[2], cells[3]));
            }
            s.push_str(&format!("dynamical degree estimate: {:.4}\n", r.dynamical_degree_estimate));
            match r.mu_exact {
                Some(m) => s.push_str(&format!("mu = {}\n", m)),
                None => s.push_str(&format!("mu >= {}\n", r.mu_lower_bound)),
            }
            s.push_str(&format!("verdict: {}\n", r.verdict.level.as_str()));
            for n in r.notes.iter().chain(&r.inconsistencies) {
                s.push_str(&format!("  {}\n", n));
            }
            s
        }
        Format::Json => pretty(&serde_json::to_value(&r).expect("serializable")),
        Format::Csv => r.to_csv(),
        Format::Dot => return Err(unsupported(cli)),
    };
    Ok(Output { text, code })
}

fn verify(cli: &Cli) -> Run {
    let opts = VerifyOptions {
        seed: cli.seed,
        horizon: cli.horizon.unwrap_or(VerifyOptions::default().horizon),
        degree_cap: cli.degree_cap,
        ..VerifyOptions::default()
    };
    let report = run_verify_with(&opts, |c| {
        eprintln!("[{:>2}/17] {:<30} {} ({:.2}s)", c.index, c.name, c.status.label(), c.seconds);
    });
    let code = if report.all_passed() {
        status::OK
    } else {
        status::VERIFY_FAILED
    };
    let text = match cli.format {
        Format::Table => report.to_table(),
        Format::Json => pretty(&serde_json::to_value(&report).expect("serializable")),
        Format::Csv => report.to_csv(),
        Format::Dot => return Err(unsupported(cli)),
    };
    Ok(Output { text, code })
}
