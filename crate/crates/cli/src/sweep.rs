//! Property sweeps over `(n, m)` grids. Cells run on worker threads and are
//! reported in cell order.

use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use frobenius_core::exact::{format_rational, ratio};
use frobenius_core::form_graph::{build_form_graph, rebuild_cyclic_form_graph};
use frobenius_core::gallery::{self, family_support, principal_candidate};
use frobenius_core::mcybe;
use frobenius_core::sln::{self, kirillov_matrix};
use frobenius_core::{Family, Functional, LieSupport, Rational};
use num_integer::gcd;
use serde_json::{json, Map, Value};

use crate::commands::integer_string;
use crate::{Failure, Property, Report, SweepArgs};

struct Cell {
    n: usize,
    m: usize,
    pass: bool,
    detail: Map<String, Value>,
}

fn cells(a: &SweepArgs) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for n in a.min_n.max(2)..=a.max_n {
        for m in 1..n {
            let keep = match a.property {
                Property::Frobenius => true,
                Property::Subprime => m >= 2,
                _ => gcd(n, m) == 1,
            };
            if keep {
                out.push((n, m));
            }
        }
    }
    out
}

fn obj(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => Map::new(),
    }
}

fn evaluate(a: &SweepArgs, n: usize, m: usize) -> frobenius_core::Result<(bool, Map<String, Value>)> {
    Ok(match a.property {
        Property::Frobenius => {
            if gcd(n, m) == 1 {
                let (g, s) = family_support(Family::Cyclic, n, m)?;
                let cert = sln::certify(&kirillov_matrix(&g, &Functional::from_support(&s))?);
                (cert.frobenius, obj(json!({"coprime": true, "frobenius": cert.frobenius, "determinant": format_rational(&cert.determinant)})))
            } else {
                let g = LieSupport::parabolic(n, m)?;
                let seed = a.seed ^ ((n as u64) << 32 | m as u64);
                let k = sln::algebra_index_estimate(&g, a.samples, seed)?;
                (k >= 1, obj(json!({"coprime": false, "frobenius": k == 0, "least_kernel_dimension": k})))
            }
        }
        Property::Subprime => {
            let (g, s) = family_support(Family::Subprime, n, m)?;
            let cert = sln::certify(&kirillov_matrix(&g, &Functional::from_support(&s))?);
            let expected = n % m == 1 || n % m == m - 1;
            (cert.frobenius == expected, obj(json!({"expected": expected, "frobenius": cert.frobenius})))
        }
        Property::Root => {
            let (s, _) = gallery::cyclic_support(n, m)?;
            let tree_root = gallery::gamma_graph(n, &s).is_rooted_tree().root;
            match gallery::cyclic_root(n, m) {
                Ok(root) => (true, obj(json!({"root": root, "tree_root": tree_root}))),
                Err(e) => (false, obj(json!({"tree_root": tree_root, "error": e.to_string()}))),
            }
        }
        Property::Trace => {
            let (g, s) = family_support(Family::Cyclic, n, m)?;
            let d = principal_candidate(n, &s)?;
            let spectrum = d.ad_spectrum(&g);
            let trace: Rational = spectrum.iter().sum();
            let half = ratio(g.dim() as i64, 2);
            let unbroken = integer_string(&spectrum);
            (
                trace == half && unbroken,
                obj(json!({"trace": format_rational(&trace), "half_dimension": format_rational(&half), "integer_string": unbroken})),
            )
        }
        Property::Mcybe => {
            let cyclic = mcybe::root_progression(n, m);
            let chain = mcybe::t_chain_progression(n, m);
            let mut d = obj(json!({"cyclic_monotone": cyclic.is_ok(), "chain_monotone": chain.is_ok()}));
            if let Ok(p) = &cyclic {
                d.insert("order".into(), json!(p.order));
            }
            (cyclic.is_ok(), d)
        }
        Property::Rebuild => {
            let (g, s) = family_support(Family::Cyclic, n, m)?;
            let same = rebuild_cyclic_form_graph(n, m)?.same_graph(&build_form_graph(&g, &s)?);
            (same, obj(json!({"same": same})))
        }
    })
}

pub fn run(a: &SweepArgs) -> Result<Report, Failure> {
    if a.max_n > 16 {
        return Err(Failure::Usage("--max-n is capped at 16".into()));
    }
    let grid = cells(a);
    let threads = a
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |k| k.get()))
        .clamp(1, grid.len().max(1));
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Cell>>> = Mutex::new((0..grid.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(n, m)) = grid.get(k) else { break };
                let (pass, detail) = match evaluate(a, n, m) {
                    Ok(x) => x,
                    Err(e) => (false, obj(json!({"error": e.to_string()}))),
                };
                slots.lock().unwrap()[k] = Some(Cell { n, m, pass, detail });
            });
        }
    });
    let done: Vec<Cell> = slots.into_inner().unwrap().into_iter().map(|c| c.expect("every cell ran")).collect();
    let passed = done.iter().filter(|c| c.pass).count();
    let mut r = Report::default();
    r.put("property", format!("{:?}", a.property).to_lowercase());
    r.put("min_n", a.min_n.max(2));
    r.put("max_n", a.max_n);
    if matches!(a.property, Property::Frobenius) {
        r.put("samples", a.samples);
        r.put("seed", a.seed);
    }
    let rows: Vec<Value> = done
        .iter()
        .map(|c| {
            let mut m = Map::new();
            m.insert("n".into(), json!(c.n));
            m.insert("m".into(), json!(c.m));
            m.insert("pass".into(), json!(c.pass));
            m.extend(c.detail.clone());
            Value::Object(m)
        })
        .collect();
    r.put("cells", rows);
    r.put("passed", passed);
    r.put("failed", done.len() - passed);
    for c in &done {
        let detail: Vec<String> = c.detail.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(r.text, "{:>3} {:>3}  {}  {}", c.n, c.m, if c.pass { "pass" } else { "FAIL" }, detail.join(" "));
    }
    let _ = write!(r.text, "{passed}/{} passed", done.len());
    r.negative = passed != done.len();
    Ok(r)
}
