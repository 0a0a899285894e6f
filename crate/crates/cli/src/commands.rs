use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use frobenius_core::cybe::{self, WedgeTwo};
use frobenius_core::exact::{format_rational, rat, ratio, to_i64};
use frobenius_core::form_graph::{self, build_form_graph};
use frobenius_core::gallery::{self, family_support, gamma_graph, principal_candidate};
use frobenius_core::graph::{self, Graph};
use frobenius_core::local_ring::{self, RingPresentation};
use frobenius_core::mcybe::{self, RootProgression};
use frobenius_core::sln::{self, kirillov_matrix};
use frobenius_core::{Family, Functional, IndexPair, LieSupport, Rational, Reconstruction};
use serde_json::{json, Value};

use crate::{
    envelope, parse, sweep, AlgebraArgs, CheckArgs, Command, Failure, FamilyArgs, GraphArgs, LocalRingAction,
    McybeAction, MeanderArgs, Method, ProgressionArgs, Reading, Report, RmatrixArgs,
};

pub fn execute(cmd: &Command, header: &str) -> Result<Report, Failure> {
    match cmd {
        Command::Support(a) => support(a),
        Command::Gamma(a) => gamma(a, header),
        Command::Biggraph(a) => biggraph(a, header),
        Command::Principal(a) => principal(a),
        Command::CheckFrobenius(a) => check_frobenius(a),
        Command::Rmatrix(a) => rmatrix(a),
        Command::Meander(a) => meander(a, header),
        Command::Mcybe { action } => mcybe_cmd(action),
        Command::Localring { action } => localring(action, header),
        Command::Sweep(a) => sweep::run(a),
        Command::Verify { input } => verify(input),
    }
}

fn pairs_text(s: &BTreeSet<IndexPair>) -> String {
    s.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")
}

fn family_name(f: Family) -> Value {
    serde_json::to_value(f).expect("family")
}

fn put_family(r: &mut Report, a: &FamilyArgs) {
    r.put("family", family_name(a.family));
    r.put("n", a.n);
    r.put("m", a.m);
}

fn support(a: &FamilyArgs) -> Result<Report, Failure> {
    let (_, s) = family_support(a.family, a.n, a.m)?;
    let mut r = Report::default();
    put_family(&mut r, a);
    r.put("pairs", &s);
    match a.family {
        Family::Cyclic => r.put("strings", gallery::cyclic_support(a.n, a.m)?.1),
        Family::UpperTriangular => r.put("strikes", gallery::upper_triangular_support(a.n, a.m)?.1),
        _ => {}
    }
    r.text = pairs_text(&s);
    Ok(r)
}

fn gamma(a: &FamilyArgs, header: &str) -> Result<Report, Failure> {
    let (_, s) = family_support(a.family, a.n, a.m)?;
    let g = gamma_graph(a.n, &s);
    let rooted = g.is_rooted_tree();
    let mut r = Report::default();
    put_family(&mut r, a);
    r.put("arcs", &g.arcs);
    r.put("tree", g.is_tree());
    r.put("rooted", rooted.rooted);
    r.put("root", rooted.root);
    let arcs: Vec<String> = g.arcs.iter().map(|p| format!("{}->{}", p.i, p.j)).collect();
    r.text = arcs.join(" ");
    if let Some(root) = rooted.root {
        let _ = write!(r.text, "\nroot {root}");
    }
    r.dot = Some(g.to_dot("gamma", header));
    Ok(r)
}

fn biggraph(a: &FamilyArgs, header: &str) -> Result<Report, Failure> {
    let (g, s) = family_support(a.family, a.n, a.m)?;
    let fg = build_form_graph(&g, &s)?;
    let d = principal_candidate(a.n, &s)?;
    let comps = form_graph::eigenpair_components(&fg, &d)?;
    let pm = form_graph::perfect_matching_unique(&fg)?;
    let rank_sum: usize = comps.iter().map(|c| c.rank).sum();
    let rooted = form_graph::rooted_components_check(&fg);
    let mut r = Report::default();
    put_family(&mut r, a);
    r.put("vertices", fg.vertex_count());
    r.put("arcs", fg.arcs.len());
    r.put("components", comps.len());
    r.put("matching_number", pm.matching.number);
    r.put("perfect_matching_unique", pm.unique);
    r.put("rooted_components", rooted);
    r.put("rank_sum", rank_sum);
    r.put("dimension", g.dim());
    let table: Vec<Value> = comps
        .iter()
        .map(|c| {
            json!({
                "id": c.id,
                "size": c.vertices.len(),
                "eigenpair": [format_rational(&c.eigenpair), format_rational(&(rat(1) - &c.eigenpair))],
                "rooted": c.rooted,
                "matching_number": c.matching_number,
                "rank": c.rank,
                "vertices": c.vertices.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    r.put("component_table", table);
    r.negative = rank_sum != g.dim();
    r.text = format!(
        "vertices {}\narcs {}\ncomponents {}\nmatching number {}\nunique perfect matching {}\nrooted components {}\nrank {} of {}",
        fg.vertex_count(),
        fg.arcs.len(),
        comps.len(),
        pm.matching.number,
        pm.unique,
        rooted,
        rank_sum,
        g.dim()
    );
    r.dot = Some(fg.to_dot(header, Some(&comps)));
    Ok(r)
}

pub fn integer_string(values: &[Rational]) -> bool {
    let Some(set) = values.iter().map(to_i64).collect::<Option<BTreeSet<i64>>>() else {
        return false;
    };
    match (set.first(), set.last()) {
        (Some(lo), Some(hi)) => (hi - lo + 1) as usize == set.len(),
        _ => true,
    }
}

fn principal(a: &FamilyArgs) -> Result<Report, Failure> {
    let (g, s) = family_support(a.family, a.n, a.m)?;
    let d = principal_candidate(a.n, &s)?;
    let f = Functional::from_support(&s);
    let cert = sln::is_frobenius(&g, &f)?;
    if cert.frobenius {
        let solved = sln::principal_by_solving(&g, &f)?;
        if solved != d.to_element() {
            return Err(Failure::Usage("principal element does not solve F∘ad F̂ = F".into()));
        }
    }
    let (entries, shift) = d.integral_form();
    let spectrum = d.ad_spectrum(&g);
    let trace: Rational = spectrum.iter().sum();
    let mut mult: BTreeMap<Rational, usize> = BTreeMap::new();
    for v in &spectrum {
        *mult.entry(v.clone()).or_default() += 1;
    }
    let mut r = Report::default();
    put_family(&mut r, a);
    r.put("diagonal", &d);
    r.put("entries", entries.iter().map(format_rational).collect::<Vec<_>>());
    r.put("shift", format_rational(&shift));
    r.put("frobenius", cert.frobenius);
    r.put("trace", format_rational(&trace));
    r.put("half_dimension", format_rational(&ratio(g.dim() as i64, 2)));
    r.put("integer_string", integer_string(&spectrum));
    r.put(
        "spectrum",
        mult.iter().map(|(v, k)| (format_rational(v), *k)).collect::<Vec<_>>(),
    );
    let shown: Vec<String> = entries.iter().map(format_rational).collect();
    r.text = format!("diag({}) - {} I", shown.join(","), format_rational(&shift));
    r.negative = !cert.frobenius;
    Ok(r)
}

fn algebra(a: &AlgebraArgs, n: Option<usize>, m: Option<usize>) -> Result<LieSupport, Failure> {
    if let Some(p) = &a.parabolic {
        let (n, m) = parse::pair(p)?;
        return Ok(LieSupport::parabolic(n, m)?);
    }
    if let (Some(t), Some(b)) = (&a.top, &a.bottom) {
        return Ok(LieSupport::seaweed(&parse::usize_list(t)?, &parse::usize_list(b)?)?);
    }
    match (n, m) {
        (Some(n), Some(m)) => Ok(LieSupport::parabolic(n, m)?),
        _ => Err(Failure::Usage("give --parabolic n,m, --top/--bottom or --n/--m".into())),
    }
}

fn put_algebra(r: &mut Report, g: &LieSupport) {
    r.put("n", g.n);
    r.put("algebra", &g.kind);
    r.put("dimension", g.dim());
}

fn check_frobenius(a: &CheckArgs) -> Result<Report, Failure> {
    let mut r = Report::default();
    if a.random {
        let g = algebra(&a.algebra, a.n, a.m)?;
        let index = sln::algebra_index_estimate(&g, a.samples, a.seed)?;
        put_algebra(&mut r, &g);
        r.put("samples", a.samples);
        r.put("seed", a.seed);
        r.put("least_kernel_dimension", index);
        r.put("frobenius", index == 0);
        r.text = format!("least kernel dimension {index} over {} samples", a.samples);
        r.negative = index != 0;
        return Ok(r);
    }
    let (Some(family), Some(n), Some(m)) = (a.family, a.n, a.m) else {
        return Err(Failure::Usage("give --family, --n and --m, or --random".into()));
    };
    let (g, s) = family_support(family, n, m)?;
    let km = kirillov_matrix(&g, &Functional::from_support(&s))?;
    let cert = sln::certify(&km);
    r.put("family", family_name(family));
    r.put("n", n);
    r.put("m", m);
    r.put("certificate", &cert);
    r.text = format!(
        "dimension {}, rank {}, kernel {}, det {}",
        cert.dimension,
        cert.rank,
        cert.kernel_dimension,
        format_rational(&cert.determinant)
    );
    r.negative = !cert.frobenius;
    Ok(r)
}

fn rmatrix(a: &RmatrixArgs) -> Result<Report, Failure> {
    let fa = &a.family;
    let (g, s) = family_support(fa.family, fa.n, fa.m)?;
    let f = Functional::from_support(&s);
    let km = kirillov_matrix(&g, &f)?;
    let cert = sln::certify(&km);
    let mut r = Report::default();
    put_family(&mut r, fa);
    r.put("method", format!("{:?}", a.method).to_lowercase());
    if !cert.frobenius {
        r.put("frobenius", false);
        r.text = format!("not Frobenius: kernel dimension {}", cert.kernel_dimension);
        r.negative = true;
        return Ok(r);
    }
    let (rm, parts) = match a.method {
        Method::Invert => (cybe::r_from_inverse(&km)?, None),
        Method::Lagrangian => {
            let d = principal_candidate(fa.n, &s)?;
            (cybe::r_from_lagrangian(&cybe::lagrangian_split(&g, &f, &d)?), None)
        }
        Method::Peel => {
            let fg = build_form_graph(&g, &s)?;
            let comps = cybe::peel_components(&fg)?;
            let mut total = WedgeTwo::zero();
            for c in &comps {
                total.add(&c.r);
            }
            (total, Some(comps.iter().map(|c| c.notation()).collect::<Vec<_>>()))
        }
    };
    let defining = cybe::satisfies_defining_property(&rm, &km)?;
    r.put("frobenius", true);
    r.put("r", &rm);
    r.put("expression", rm.to_string());
    r.put("scale", cybe::R_SCALE);
    r.put("defining_property", defining);
    if let Some(p) = &parts {
        r.put("components", p);
    }
    r.text = match &parts {
        Some(p) => p.join("\n"),
        None => rm.to_string(),
    };
    let mut ok = defining;
    if a.verify_cybe {
        let bracket = cybe::cybe_check(&rm, &g)?;
        r.put("cybe_zero", bracket.is_zero());
        r.put("cybe_terms", bracket.len());
        let _ = write!(r.text, "\n[r, r] {}", if bracket.is_zero() { "= 0".to_string() } else { bracket.to_string() });
        ok &= bracket.is_zero();
    }
    r.negative = !ok;
    Ok(r)
}

fn meander(a: &MeanderArgs, header: &str) -> Result<Report, Failure> {
    let g = algebra(&a.algebra, None, None)?;
    let census = gallery::meander_census(&g)?;
    let index = census.index();
    let mut r = Report::default();
    put_algebra(&mut r, &g);
    r.put("census", census);
    r.put("index", index);
    r.text = format!(
        "loops {}, chains {}, isolated {}, index {index}",
        census.loops, census.chains, census.isolated
    );
    if let Some(k) = a.samples {
        let sampled = sln::algebra_index_estimate(&g, k, a.seed)?;
        r.put("samples", k);
        r.put("seed", a.seed);
        r.put("sampled_index", sampled);
        let _ = write!(r.text, "\nsampled index {sampled} over {k} functionals");
    }
    r.negative = index != 0;
    let s = gallery::dk_support(&g)?;
    r.dot = Some(gamma_graph(g.n, &s).to_dot("meander", header));
    Ok(r)
}

fn progression(p: &ProgressionArgs) -> Result<RootProgression, Failure> {
    Ok(match p.reading {
        Reading::Cyclic => mcybe::root_progression(p.n, p.m)?,
        Reading::Chain => mcybe::t_chain_progression(p.n, p.m)?,
    })
}

fn arrows(order: &[usize], descents: &[(usize, usize)]) -> String {
    let mut s = order.first().map(|v| v.to_string()).unwrap_or_default();
    for w in order.windows(2) {
        let mark = if descents.contains(&(w[0], w[1])) { " => " } else { " -> " };
        let _ = write!(s, "{mark}{}", w[1]);
    }
    s
}

fn pair_list(ps: &[(usize, usize)]) -> String {
    if ps.is_empty() {
        return "none".into();
    }
    ps.iter().map(|(a, b)| format!("{a}->{b}")).collect::<Vec<_>>().join(", ")
}

fn mcybe_cmd(action: &McybeAction) -> Result<Report, Failure> {
    let mut r = Report::default();
    match action {
        McybeAction::Progression(p) => {
            let prog = progression(p)?;
            let descents = prog.descents();
            let triple = mcybe::maximal_triple(p.n, p.m)?;
            r.put("action", "progression");
            r.put("reading", format!("{:?}", p.reading).to_lowercase());
            r.put("progression", &prog);
            r.put("descents", &descents);
            r.put("maximal_triple", &triple);
            r.text = format!("{}\ndescents: {}", arrows(&prog.order, &descents), pair_list(&descents));
        }
        McybeAction::Degenerate { p, h } => {
            let prog = progression(p)?;
            let h: Vec<Rational> = match h {
                Some(s) => parse::rational_list(s)?,
                None => {
                    let (_, s) = family_support(Family::Cyclic, p.n, p.m)?;
                    principal_candidate(p.n, &s)?.diagonal
                }
            };
            r.put("action", "degenerate");
            r.put("reading", format!("{:?}", p.reading).to_lowercase());
            r.put("order", &prog.order);
            r.put("h", h.iter().map(format_rational).collect::<Vec<_>>());
            match mcybe::degeneration_limit(&prog, &h) {
                Ok(dg) => {
                    let limit = mcybe::AdmissibleTriple::from_pairs(p.n, &dg.surviving)?;
                    let below = mcybe::triple_precedes(&limit, &prog.triple()?);
                    r.put("surviving", &dg.surviving);
                    r.put("removed", &dg.removed);
                    r.put("direction", dg.direction);
                    r.put("precedes", below);
                    r.text = format!(
                        "{}\nlimit t -> {}\nsurviving: {}\nremoved: {}",
                        arrows(&prog.order, &prog.descents()),
                        if dg.direction > 0 { "+inf" } else { "-inf" },
                        pair_list(&dg.surviving),
                        pair_list(&dg.removed)
                    );
                }
                Err(frobenius_core::Error::Divergent(a, b)) => {
                    r.put("divergent", [a, b]);
                    r.text = format!("diverges: {a}->{b} grows in both directions");
                    r.negative = true;
                }
                Err(e) => return Err(e.into()),
            }
        }
        McybeAction::SeparatingH { p, keep } => {
            let prog = progression(p)?;
            let keep: BTreeSet<(usize, usize)> = parse::root_pairs(keep)?.into_iter().collect();
            let h = mcybe::find_separating_h(&prog, &keep)?;
            let dg = mcybe::degeneration_limit(&prog, &mcybe::integer_diagonal(&h))?;
            let round_trip = dg.surviving.iter().copied().collect::<BTreeSet<_>>() == keep;
            r.put("action", "separating-h");
            r.put("reading", format!("{:?}", p.reading).to_lowercase());
            r.put("order", &prog.order);
            r.put("keep", &keep);
            r.put("h", &h);
            r.put("removed", &dg.removed);
            r.put("round_trip", round_trip);
            let hs: Vec<String> = h.iter().map(|v| v.to_string()).collect();
            r.text = format!("h = diag({})\nremoved: {}", hs.join(","), pair_list(&dg.removed));
            r.negative = !round_trip;
        }
    }
    Ok(r)
}

fn input_graph(a: &GraphArgs) -> Result<Graph, Failure> {
    let (list, oriented) = match (&a.edges, &a.arcs) {
        (Some(e), None) => (parse::edge_list(e, '-')?, false),
        (None, Some(e)) => (parse::edge_list(e, '>')?, true),
        _ => return Err(Failure::Usage("give --edges or --arcs".into())),
    };
    let used = list.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    let n = a.vertices.unwrap_or(used);
    if n < used {
        return Err(Failure::Usage(format!("--vertices {n} but vertex {} is used", used - 1)));
    }
    Ok(if oriented { Graph::from_arcs(n, &list)? } else { Graph::from_edges(n, &list)? })
}

fn dims_text(d: &[u64]) -> String {
    d.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

fn localring(action: &LocalRingAction, header: &str) -> Result<Report, Failure> {
    let mut r = Report::default();
    match action {
        LocalRingAction::Dims(a) => {
            let g = input_graph(a)?;
            let p = local_ring::present(&g);
            let dims = local_ring::radical_power_dims(&p)?;
            let nil = local_ring::nilpotence_index(&p)?;
            let mn = graph::matching_number(&g)?.number;
            r.put("action", "dims");
            r.put("presentation", &p);
            r.put("dims", &dims);
            r.put("nilpotence_index", nil);
            r.put("matching_number", mn);
            r.put("graph_connected", local_ring::graph_connected(&p));
            r.text = format!("dims ({})\nnilpotence index {nil}\nmatching number {mn}", dims_text(&dims));
            r.negative = nil != mn + 1;
        }
        LocalRingAction::Reconstruct { graph, presentation } => {
            let p: RingPresentation = match presentation {
                Some(path) => {
                    let raw = std::fs::read_to_string(path)
                        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
                    serde_json::from_str(&raw).map_err(|e| Failure::Usage(format!("bad presentation: {e}")))?
                }
                None => local_ring::present(&input_graph(graph)?),
            };
            r.put("action", "reconstruct");
            r.put("presentation", &p);
            if !local_ring::graph_connected(&p) {
                r.put("graph_connected", false);
                r.text = "not graph connected".into();
                r.negative = true;
                return Ok(r);
            }
            r.put("graph_connected", true);
            let rec = local_ring::reconstruct(&p)?;
            r.put("reconstruction", &rec);
            match &rec {
                Reconstruction::Graph { graph, edges } => {
                    let shown: Vec<String> = edges
                        .iter()
                        .zip(&p.generators)
                        .map(|((u, v), name)| format!("{name}: {u}-{v}"))
                        .collect();
                    r.text = format!("{} vertices\n{}", graph.vertex_count(), shown.join("\n"));
                    r.dot = Some(graph.to_dot("reconstructed", header));
                }
                Reconstruction::AmbiguousR3 => {
                    r.text = "ambiguous: triangle or three-pointed star".into();
                    r.negative = true;
                }
            }
        }
        LocalRingAction::Reduced(a) => {
            let g = input_graph(a)?;
            let full = local_ring::radical_power_dims(&local_ring::present(&g))?;
            let reduced = local_ring::reduced_radical_dims(&g)?;
            r.put("action", "reduced");
            r.put("dims", &full);
            r.put("reduced_dims", &reduced);
            r.text = format!("full ({})\nreduced ({})", dims_text(&full), dims_text(&reduced));
        }
    }
    Ok(r)
}

fn verify(path: &std::path::Path) -> Result<Report, Failure> {
    let raw = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let stored: Value = serde_json::from_str(&raw).map_err(|e| Failure::Usage(format!("not a JSON certificate: {e}")))?;
    if stored.get("schema") != Some(&Value::from(1)) {
        return Err(Failure::Usage("unsupported or missing schema".into()));
    }
    let args: Vec<String> = stored
        .get("args")
        .and_then(|a| serde_json::from_value(a.clone()).ok())
        .ok_or_else(|| Failure::Usage("certificate has no args".into()))?;
    let cli = <crate::Cli as clap::Parser>::try_parse_from(std::iter::once("frobenius".to_string()).chain(args.iter().cloned()))
        .map_err(|e| Failure::Usage(format!("recorded args do not parse: {e}")))?;
    if matches!(cli.command, Command::Verify { .. }) {
        return Err(Failure::Usage("cannot verify a verify result".into()));
    }
    let name = cli.command.name();
    let fresh = envelope(name, &args, &execute(&cli.command, "")?);
    let mut mismatched: Vec<String> = Vec::new();
    if let (Value::Object(a), Value::Object(b)) = (&stored, &fresh) {
        let keys: BTreeSet<&String> = a.keys().chain(b.keys()).collect();
        mismatched = keys.into_iter().filter(|k| a.get(*k) != b.get(*k)).cloned().collect();
    }
    let mut semantic = None;
    if let (Command::Rmatrix(ra), Some(rv)) = (&cli.command, stored.get("r")) {
        let stored_r: WedgeTwo = serde_json::from_value(rv.clone()).map_err(|e| Failure::Usage(format!("bad r: {e}")))?;
        let (g, s) = family_support(ra.family.family, ra.family.n, ra.family.m)?;
        let km = kirillov_matrix(&g, &Functional::from_support(&s))?;
        semantic = Some(cybe::satisfies_defining_property(&stored_r, &km)?);
    }
    let valid = mismatched.is_empty() && semantic != Some(false);
    let mut r = Report::default();
    r.put("checked", name);
    r.put("valid", valid);
    r.put("mismatched", &mismatched);
    if let Some(s) = semantic {
        r.put("defining_property", s);
    }
    r.text = if valid { format!("{name}: valid") } else { format!("{name}: INVALID ({})", mismatched.join(", ")) };
    r.negative = !valid;
    Ok(r)
}
