use std::collections::{BTreeMap, HashSet};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use opgraph::constructions::{
    induced_subgroup, isometry_group_order, obstruction_witness, swap_construction, unitary_generators,
    unitary_group_order,
};
use opgraph::graph::{
    automorphism_group, brute_force_automorphisms, build_graph, classify_tau, compare_partitions, connected_components,
    eigenspace_partition, enumerate_flags, fiber_partition, fixtures, ibar_components, ij_components, induced_tau,
    is_automorphism, johnson_automorphisms, johnson_graph, LabeledGraph, SearchLimits, SimpleGraph, TauClass,
};
use opgraph::linalg::{Matrix, Subspace};
use opgraph::spectral::{
    a2_violation, adjacent, analyze_pair, assemble_matrix, classify_pairs, counterexample_search, fiber,
    geometric_adjacency, random_flag, Certificate, ClassSignature, EigenFlag, IndexPair, PairReport, SearchOutcome,
};
use opgraph::starfield::{FieldAutomorphism, StarField};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::{Backend, BackendConfig, ExperimentConfig};
use crate::report::Report;

pub const COMMANDS: [&str; 6] = ["enumerate", "adjacency", "components", "automorphisms", "verify-lemma", "counterexample"];

pub const LEMMAS: [&str; 5] = ["a1a2-equiv", "lift", "swap", "obstruction", "johnson-tau"];

macro_rules! with_backend {
    ($backend:expr, $f:ident => $body:expr) => {
        match $backend {
            Backend::Qi($f) => $body,
            Backend::Gf($f) => $body,
        }
    };
}

/// Run the command named in `cfg` and time it.
pub fn execute(cfg: &ExperimentConfig) -> Result<Report> {
    let command = cfg.command.clone().ok_or_else(|| anyhow!("no command given"))?;
    if !COMMANDS.contains(&command.as_str()) {
        bail!("unknown command {command:?}; expected one of {}", COMMANDS.join(", "));
    }
    let start = Instant::now();
    let mut report = if command == "adjacency" {
        adjacency(cfg)?
    } else if command == "automorphisms" && cfg.options.fixture.is_some() {
        let mut report = Report::new(&command, cfg.clone());
        fixture_automorphisms(cfg, &mut report)?;
        report
    } else {
        let mut cfg = cfg.clone();
        cfg.backend = cfg.backend.resolved()?;
        let mut report = Report::new(&command, cfg.clone());
        with_backend!(cfg.backend.build()?, f => on_backend(&f, &command, &cfg, &mut report))?;
        report
    };
    report.seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

fn on_backend<F: StarField>(f: &F, command: &str, cfg: &ExperimentConfig, report: &mut Report) -> Result<()> {
    match command {
        "enumerate" => enumerate(f, cfg, report),
        "components" => components(f, cfg, report),
        "automorphisms" => class_automorphisms(f, cfg, report),
        "verify-lemma" => verify_lemma(f, cfg, report),
        "counterexample" => counterexample(f, cfg, report),
        other => unreachable!("command {other} is dispatched elsewhere"),
    }
}

fn class_graph<F: StarField>(f: &F, sig: &ClassSignature<F::Elem>) -> Result<LabeledGraph<F::Elem>> {
    Ok(build_graph(f, enumerate_flags(f, sig)?)?)
}

fn histogram(sizes: impl IntoIterator<Item = usize>) -> Value {
    let mut h = BTreeMap::new();
    for s in sizes {
        *h.entry(s).or_insert(0usize) += 1;
    }
    h.into_iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>().into()
}

fn graph_summary<E: Clone + Eq + std::hash::Hash + std::fmt::Debug>(g: &LabeledGraph<E>) -> Value {
    json!({
        "vertices": g.len(),
        "edges": g.graph().edge_count(),
        "degrees": histogram(g.graph().degrees()),
        "complete": g.graph().is_complete(),
    })
}

fn pair_option(values: Option<&Vec<usize>>, k: usize) -> Result<(usize, usize)> {
    let p = ExperimentConfig::positions(values.map_or(&[1, 2][..], |v| v.as_slice()), k)?;
    match p[..] {
        [i, j] if i != j => Ok((i, j)),
        _ => bail!("a pair of two distinct positions is required"),
    }
}

fn enumerate<F: StarField>(f: &F, cfg: &ExperimentConfig, report: &mut Report) -> Result<()> {
    let sig = cfg.signature.build(f)?;
    let flags = enumerate_flags(f, &sig)?;
    let distinct = flags.iter().collect::<HashSet<_>>().len() == flags.len();
    let mut results = json!({ "signature": sig.to_json(f), "count": flags.len() });
    if cfg.options.dump {
        results["flags"] = flags.iter().map(|a| a.to_json(f)).collect();
    }
    report.results = results;
    report.check("enumerated flags are pairwise distinct", distinct);
    Ok(())
}

/// The pair file holds `a` and `b` (a certificate works too) and
/// optionally its own `backend`.
fn adjacency(cfg: &ExperimentConfig) -> Result<Report> {
    let path = cfg.options.pair_file.as_deref().ok_or_else(|| anyhow!("adjacency needs a pair file"))?;
    let file = cfg.resolve(path);
    let text = std::fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
    let pair: Value = serde_json::from_str(&text).with_context(|| format!("parsing {path}"))?;
    let mut cfg = cfg.clone();
    if let Some(b) = pair.get("backend") {
        cfg.backend = serde_json::from_value::<BackendConfig>(b.clone()).context("pair file backend")?;
    }
    cfg.backend = cfg.backend.resolved()?;
    let mut report = Report::new("adjacency", cfg.clone());
    with_backend!(cfg.backend.build()?, f => adjacency_on(&f, &pair, &mut report))?;
    Ok(report)
}

fn adjacency_on<F: StarField>(f: &F, pair: &Value, report: &mut Report) -> Result<()> {
    let a = EigenFlag::from_json(f, &pair["a"]).context("flag a")?;
    let b = EigenFlag::from_json(f, &pair["b"]).context("flag b")?;
    let r = analyze_pair(f, &a, &assemble_matrix(f, &a), &b, &assemble_matrix(f, &b));
    let mut results = pair_json(&r);
    results["signature"] = a.signature().to_json(f);
    if let Some(v) = a2_violation(f, &a, &b)? {
        results["a2_violation"] = v.to_json(f);
    }
    if pair.get("violation").is_some() {
        let verified = Certificate::from_json(f, pair).and_then(|c| c.verify(f));
        results["certificate"] = json!({ "verified": verified.is_ok(), "error": verified.err().map(|e| e.to_string()) });
        report.check("certificate verifies", results["certificate"]["verified"] == true);
    }
    report.results = results;
    report.check("(A1 and A2) agrees with geometric adjacency", r.consistent());
    Ok(())
}

fn pair_json(r: &PairReport) -> Value {
    json!({
        "a1": r.a1,
        "a2": r.a2,
        "geometric_type": r.geometric.map(|t| t.to_json()),
        "adjacent": r.adjacent(),
        "verdict": r.verdict(),
        "consistent": r.consistent(),
    })
}

fn components<F: StarField>(f: &F, cfg: &ExperimentConfig, report: &mut Report) -> Result<()> {
    let sig = cfg.signature.build(f)?;
    let g = class_graph(f, &sig)?;
    let kind = cfg.options.component_type.as_deref().unwrap_or("global");
    let mut results = json!({ "type": kind, "graph": graph_summary(&g) });
    match kind {
        "global" => {
            let comps = connected_components(g.graph());
            results["components"] = json!(comps.len());
            results["component_sizes"] = histogram(comps.iter().map(Vec::len));
            report.check("the graph is connected (complex analog)", comps.len() == 1);
        }
        "ij" => {
            let (i, j) = pair_option(cfg.options.pair.as_ref(), sig.len())?;
            let comps = ij_components(&g, IndexPair::new(i, j).expect("distinct"));
            let forward = compare_partitions(&comps, &fiber_partition(f, &g, i, j)?);
            let backward = compare_partitions(&comps, &fiber_partition(f, &g, j, i)?);
            results["pair"] = json!([i + 1, j + 1]);
            results["components"] = json!(comps.len());
            results["component_sizes"] = histogram(comps.iter().map(Vec::len));
            results["fibers"] = forward.to_json();
            results["fibers_reversed"] = backward.to_json();
            report.check("components lie inside contraction fibers", forward.refines && backward.refines);
            report.check("components equal contraction fibers (complex analog)", forward.equal);
        }
        "ibar" => {
            let i = ExperimentConfig::positions(&[cfg.options.index.unwrap_or(1)], sig.len())?[0];
            let comps = ibar_components(&g, i);
            let cmp = compare_partitions(&comps, &eigenspace_partition(&g, i));
            results["index"] = json!(i + 1);
            results["components"] = json!(comps.len());
            results["component_sizes"] = histogram(comps.iter().map(Vec::len));
            results["eigenspace_blocks"] = cmp.to_json();
            report.check("components lie inside eigenspace blocks", cmp.refines);
            report.check("components equal eigenspace blocks (complex analog)", cmp.equal);
        }
        other => bail!("unknown component type {other:?}; expected ij, ibar or global"),
    }
    report.results = results;
    report.dot = Some(g.to_dot());
    Ok(())
}

fn fixture_graph(name: &str, n: Option<usize>) -> Result<SimpleGraph> {
    Ok(match name {
        "petersen" => fixtures::petersen(),
        "cube" => fixtures::cube(),
        "prism" => fixtures::prism(),
        "k4" => fixtures::complete(4),
        "c5" => fixtures::cycle(5),
        "complete" => fixtures::complete(n.unwrap_or(4)),
        "cycle" => fixtures::cycle(n.unwrap_or(5)),
        "path" => fixtures::path(n.unwrap_or(4)),
        "star" => fixtures::star(n.unwrap_or(3)),
        other => bail!("unknown fixture {other:?}"),
    })
}

fn fixture_automorphisms(cfg: &ExperimentConfig, report: &mut Report) -> Result<()> {
    let name = cfg.options.fixture.as_deref().expect("checked by caller");
    if name == "johnson" {
        let k = cfg.options.n.ok_or_else(|| anyhow!("the johnson fixture needs --n"))?;
        let j = johnson_graph(k)?;
        let classification = johnson_automorphisms(&j)?;
        let mut results = classification.to_json();
        results["fixture"] = json!(format!("J({k},2)"));
        results["vertices"] = json!(j.graph().n());
        results["edges"] = json!(j.graph().edge_count());
        if let Some(b) = classification.brute_force_order {
            report.check("engine order matches brute force", classification.group.order == b.into());
        }
        report.check(
            "every automorphism is permutation induced or complement composed",
            classification.other == 0,
        );
        report.results = results;
        return Ok(());
    }
    let g = fixture_graph(name, cfg.options.n)?;
    let group = automorphism_group(&g, SearchLimits::default())?;
    let mut results = json!({
        "fixture": name,
        "vertices": g.n(),
        "edges": g.edge_count(),
        "order": group.order.to_string(),
        "generators": group.generators.len(),
        "search_nodes": group.nodes,
    });
    report.check("generators are automorphisms", group.generators.iter().all(|p| is_automorphism(&g, p)));
    if g.n() <= 10 {
        let brute = brute_force_automorphisms(&g).len();
        results["brute_force_order"] = json!(brute);
        report.check("engine order matches brute force", group.order == brute.into());
    }
    report.results = results;
    Ok(())
}

fn tau_json(class: &std::result::Result<TauClass, String>) -> Value {
    match class {
        Ok(TauClass::PermutationInduced(d)) => {
            json!({ "class": "permutation_induced", "delta": d.iter().map(|k| k + 1).collect::<Vec<_>>() })
        }
        Ok(TauClass::JohnsonAutomorphism) => json!({ "class": "johnson_automorphism" }),
        Ok(TauClass::NotJohnsonAutomorphism) => json!({ "class": "not_johnson_automorphism" }),
        Err(e) => json!({ "class": "not_well_defined", "error": e }),
    }
}

fn generator_taus<E: Clone + Eq + std::hash::Hash + std::fmt::Debug>(
    g: &LabeledGraph<E>,
    generators: &[Vec<usize>],
    k: usize,
) -> Vec<std::result::Result<TauClass, String>> {
    generators
        .iter()
        .map(|p| induced_tau(g, p).map(|t| classify_tau(&t, k)).map_err(|e| e.to_string()))
        .collect()
}

fn class_automorphisms<F: StarField>(f: &F, cfg: &ExperimentConfig, report: &mut Report) -> Result<()> {
    let sig = cfg.signature.build(f)?;
    let g = class_graph(f, &sig)?;
    let aut = automorphism_group(g.graph(), SearchLimits::default())?;
    let taus = generator_taus(&g, &aut.generators, sig.len());
    let mut results = json!({
        "graph": graph_summary(&g),
        "order": aut.order.to_string(),
        "base": aut.search_base,
        "orbit_sizes": aut.search_orbits,
        "search_nodes": aut.nodes,
        "generators": aut.generators.len(),
        "tau": taus.iter().map(tau_json).collect::<Vec<_>>(),
    });
    report.check("generators are automorphisms", aut.generators.iter().all(|p| is_automorphism(g.graph(), p)));
    report.check("tau is well defined for every generator", taus.iter().all(|t| t.is_ok()));
    let mut attachment = json!({ "automorphism_generators": aut.generators });
    if cfg.options.compare_induced {
        let n = sig.ambient();
        let unitaries = unitary_generators(f, n)?;
        let q = (1..).find(|&q: &u64| q * q >= f.elements().map_or(0, |e| e.len()) as u64).expect("square order");
        let iso_order = isometry_group_order(f, &unitaries, n)?;
        let target = unitary_group_order(n as u32, q);
        let induced = induced_subgroup(f, &g, &unitaries)?;
        let mut induced_json = induced.to_json();
        induced_json["isometry_generators"] = json!(unitaries.len());
        induced_json["isometry_group_order"] = json!(iso_order.to_string());
        induced_json["unitary_group_order"] = json!(target.to_string());
        induced_json["index_in_aut"] = json!(induced.index_in(&aut.order).map(|r| r.to_string()));
        results["induced"] = induced_json;
        report.check("isometry generators generate the full isometry group", iso_order == target);
        report.check(
            "induced maps are automorphisms inside the computed group",
            induced.generators.iter().all(|x| aut.contains(&x.perm)),
        );
        attachment["induced_generators"] = induced
            .generators
            .iter()
            .map(|x| json!({ "label": x.label, "permutation": x.perm }))
            .collect();
    }
    report.results = results;
    report.attachments.insert("generators".into(), attachment);
    Ok(())
}

fn verify_lemma<F: StarField>(f: &F, cfg: &ExperimentConfig, report: &mut Report) -> Result<()> {
    let lemma = cfg.options.lemma.as_deref().ok_or_else(|| anyhow!("verify-lemma needs a lemma name"))?;
    let sig = cfg.signature.build(f)?;
    let mut results = match lemma {
        "a1a2-equiv" => equivalence(f, &sig, cfg, report)?,
        "lift" => lift(f, &sig, cfg, report)?,
        "swap" => swap(f, &sig, cfg, report)?,
        "obstruction" => obstruction(f, &sig, cfg, report)?,
        "johnson-tau" => johnson_tau(f, &sig, report)?,
        other => bail!("unknown lemma {other:?}; expected one of {}", LEMMAS.join(", ")),
    };
    results["lemma"] = json!(lemma);
    results["signature"] = sig.to_json(f);
    report.results = results;
    Ok(())
}

fn equivalence<F: StarField>(
    f: &F,
    sig: &ClassSignature<F::Elem>,
    cfg: &ExperimentConfig,
    report: &mut Report,
) -> Result<Value> {
    if f.is_finite() {
        let c = classify_pairs(f, &enumerate_flags(f, sig)?)?;
        report.check("(A1 and A2) agrees with geometric adjacency on every pair", c.discrepancies.is_empty());
        return Ok(json!({ "method": "exhaustive", "classification": c.summary_json() }));
    }
    let samples = cfg.options.samples.unwrap_or(100);
    let height = cfg.budget.height;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut verdicts: BTreeMap<&str, usize> = BTreeMap::new();
    let mut discrepancies = 0;
    let mut skipped = 0;
    for s in 0..samples {
        let a = random_flag(f, sig, &mut rng, height)?;
        // alternate between a reflection inside two eigenspaces, one in the
        // whole space, and an unrelated flag
        let b = match s % 3 {
            0 => {
                let i = rng.gen_range(0..sig.len());
                let j = (i + rng.gen_range(1..sig.len())) % sig.len();
                let w = a.space(i).sum(f, a.space(j))?;
                reflect(f, &a, &random_in(f, &w, &mut rng, height))
            }
            1 => reflect(f, &a, &random_in(f, &Subspace::full(f, sig.ambient()), &mut rng, height)),
            _ => Some(random_flag(f, sig, &mut rng, height)?),
        };
        let Some(b) = b else {
            skipped += 1;
            continue;
        };
        let r = analyze_pair(f, &a, &assemble_matrix(f, &a), &b, &assemble_matrix(f, &b));
        *verdicts.entry(r.verdict()).or_default() += 1;
        if !r.consistent() {
            discrepancies += 1;
        }
    }
    report.check("(A1 and A2) agrees with geometric adjacency on every sample", discrepancies == 0);
    Ok(json!({
        "method": "sampled",
        "samples": samples,
        "skipped": skipped,
        "verdicts": verdicts,
        "discrepancies": discrepancies,
    }))
}

fn random_in<F: StarField>(f: &F, w: &Subspace<F::Elem>, rng: &mut dyn RngCore, height: u32) -> Vec<F::Elem> {
    loop {
        let c: Vec<F::Elem> = (0..w.dim()).map(|_| f.random_elem(rng, height)).collect();
        let v = w.combine(f, &c);
        if v.iter().any(|x| !f.is_zero(x)) {
            return v;
        }
    }
}

/// `RAR` for the reflection `R = I − 2P` in the line through `v`; `None`
/// when the line is degenerate.
fn reflect<F: StarField>(f: &F, a: &EigenFlag<F::Elem>, v: &[F::Elem]) -> Option<EigenFlag<F::Elem>> {
    let n = v.len();
    let p = Subspace::span(f, n, vec![v.to_vec()]).ok()?.projection_matrix(f).ok()?;
    let r = Matrix::identity(f, n).sub(f, &p.scale(f, &f.from_i64(2))).ok()?;
    a.map_semilinear(f, &r, FieldAutomorphism::IDENTITY).ok()
}

/// Contract at `(i, j)` and compare adjacency of contracted flags with
/// adjacency of their lifts.
fn lift<F: StarField>(
    f: &F,
    sig: &ClassSignature<F::Elem>,
    cfg: &ExperimentConfig,
    report: &mut Report,
) -> Result<Value> {
    let (i, j) = pair_option(cfg.options.pair.as_ref(), sig.len())?;
    let contracted = enumerate_flags(f, &sig.contracted(i, j)?)?;
    let fibers = contracted.iter().map(|t| fiber(f, t, i, j, sig)).collect::<opgraph::Result<Vec<_>>>()?;
    let merged = if j < i { j } else { j - 1 };
    let (mut pairs, mut adjacent_pairs, mut lifted, mut lifted_not_adjacent) = (0u64, 0u64, 0u64, 0u64);
    let (mut unlifted_adjacent, mut unlifted_degenerate, mut refined_ok) = (0u64, 0u64, true);
    for (x, t) in contracted.iter().enumerate() {
        for (y, u) in contracted.iter().enumerate().skip(x + 1) {
            pairs += 1;
            let has_lift = fibers[x].iter().any(|a| fibers[y].iter().any(|b| adjacent(f, a, b).unwrap_or(false)));
            let adj = adjacent(f, t, u)?;
            adjacent_pairs += adj as u64;
            lifted += has_lift as u64;
            lifted_not_adjacent += (has_lift && !adj) as u64;
            // the unmerged slots that move must span a nondegenerate space
            let mut spans_ok = true;
            for s in (0..t.signature().len()).filter(|&s| s != merged && t.space(s) != u.space(s)) {
                spans_ok &= t.space(s).sum(f, u.space(s))?.is_nondegenerate(f);
            }
            if adj && !has_lift {
                unlifted_adjacent += 1;
                unlifted_degenerate += (!spans_ok) as u64;
            }
            refined_ok &= has_lift == (adj && spans_ok);
        }
    }
    report.check("adjacent lifts give adjacent contractions", lifted_not_adjacent == 0);
    report.check("every adjacent contracted pair has adjacent lifts (complex analog)", unlifted_adjacent == 0);
    report.check("adjacent lifts exist exactly when the moving unmerged slots span nondegenerate spaces", refined_ok);
    Ok(json!({
        "pair": [i + 1, j + 1],
        "contracted_flags": contracted.len(),
        "fiber_sizes": histogram(fibers.iter().map(Vec::len)),
        "pairs": pairs,
        "adjacent_contracted_pairs": adjacent_pairs,
        "pairs_with_adjacent_lifts": lifted,
        "lifted_but_not_adjacent": lifted_not_adjacent,
        "adjacent_without_lifts": unlifted_adjacent,
        "adjacent_without_lifts_degenerate_span": unlifted_degenerate,
    }))
}

/// Replace `X_i, X_j` by a rotated pair inside `X_i + X_j`, taking the
/// first scalar `c` for which `u + c·w` gives an `{i,j}`-adjacent flag.
fn rotate<F: StarField>(f: &F, a: &EigenFlag<F::Elem>, i: usize, j: usize) -> Result<EigenFlag<F::Elem>> {
    let (xi, xj) = (a.space(i), a.space(j));
    let w = xi.sum(f, xj)?;
    let u = &xi.basis()[0];
    let v = &xj.basis()[0];
    let expected = IndexPair::new(i, j).expect("distinct");
    for c in f.sample_scalars().iter().filter(|c| !f.is_zero(c)) {
        let mut gens: Vec<Vec<F::Elem>> = xi.basis()[1..].to_vec();
        gens.push(u.iter().zip(v).map(|(x, y)| f.add(x, &f.mul(c, y))).collect());
        let yi = Subspace::span(f, a.ambient(), gens)?;
        if !yi.is_nondegenerate(f) {
            continue;
        }
        let yj = yi.relative_orthocomplement(f, &w)?;
        let mut spaces = a.spaces().to_vec();
        spaces[i] = yi;
        spaces[j] = yj;
        let Ok(b) = EigenFlag::new(f, a.signature().clone(), spaces) else {
            continue;
        };
        if geometric_adjacency(f, a, &b)? == Some(expected) && adjacent(f, a, &b)? {
            return Ok(b);
        }
    }
    bail!("no rotation of slots {} and {} gives an adjacent flag", i + 1, j + 1)
}

fn swap<F: StarField>(
    f: &F,
    sig: &ClassSignature<F::Elem>,
    cfg: &ExperimentConfig,
    report: &mut Report,
) -> Result<Value> {
    if sig.len() < 4 {
        bail!("precondition failed: the swap needs at least four eigenvalues, got {}", sig.len());
    }
    let idx = ExperimentConfig::positions(cfg.options.indices.as_deref().unwrap_or(&[1, 2, 3, 4]), sig.len())?;
    let [i, j, i2, j2] = idx[..] else {
        bail!("the swap needs four positions i, j, i', j'");
    };
    let ij = IndexPair::new(i, j).ok_or_else(|| anyhow!("i and j must differ"))?;
    let ij2 = IndexPair::new(i2, j2).ok_or_else(|| anyhow!("i' and j' must differ"))?;
    if !ij.is_disjoint(&ij2) {
        bail!("precondition failed: {ij} and {ij2} must be disjoint");
    }
    let a = EigenFlag::coordinate(f, sig.clone());
    let c = rotate(f, &a, i, j)?;
    let b = rotate(f, &c, i2, j2)?;
    let c2 = swap_construction(f, &a, &b, &c, ij, ij2)?;
    let back = swap_construction(f, &a, &b, &c2, ij2, ij)?;
    report.check(format!("C' is {ij2}-adjacent to A and {ij}-adjacent to B"), true);
    report.check("swapping again recovers C", back == c);
    Ok(json!({
        "pairs": [ij.to_json(), ij2.to_json()],
        "a": a.to_json(f),
        "b": b.to_json(f),
        "c": c.to_json(f),
        "c_swapped": c2.to_json(f),
    }))
}

fn obstruction<F: StarField>(
    f: &F,
    sig: &ClassSignature<F::Elem>,
    cfg: &ExperimentConfig,
    report: &mut Report,
) -> Result<Value> {
    let idx = ExperimentConfig::positions(cfg.options.indices.as_deref().unwrap_or(&[1, 2, 3]), sig.len())?;
    let [i, j, t] = idx[..] else {
        bail!("the obstruction needs three positions i, j, t");
    };
    let a = EigenFlag::coordinate(f, sig.clone());
    let w = obstruction_witness(f, &a, i, j, t)?;
    for (claim, holds) in &w.claims {
        report.check(claim.clone(), *holds);
    }
    Ok(w.to_json(f))
}

fn johnson_tau<F: StarField>(f: &F, sig: &ClassSignature<F::Elem>, report: &mut Report) -> Result<Value> {
    let g = class_graph(f, sig)?;
    let aut = automorphism_group(g.graph(), SearchLimits::default())?;
    let taus = generator_taus(&g, &aut.generators, sig.len());
    let mut results = json!({
        "order": aut.order.to_string(),
        "tau": taus.iter().map(tau_json).collect::<Vec<_>>(),
    });
    if sig.len() >= 3 {
        results["johnson"] = johnson_automorphisms(&johnson_graph(sig.len())?)?.to_json();
    }
    report.check("tau is well defined for every generator", taus.iter().all(|t| t.is_ok()));
    report.check(
        "every tau is an automorphism of the Johnson graph",
        taus.iter().all(|t| matches!(t, Ok(TauClass::PermutationInduced(_) | TauClass::JohnsonAutomorphism))),
    );
    Ok(results)
}

fn counterexample<F: StarField>(f: &F, cfg: &ExperimentConfig, report: &mut Report) -> Result<()> {
    let sig = cfg.signature.build(f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let outcome = counterexample_search(f, &sig, cfg.budget.into(), &mut rng)?;
    report.results = match outcome {
        SearchOutcome::Certified { certificate, attempts, classification } => {
            let cert = certificate.to_json(f);
            let text = serde_json::to_string(&cert)?;
            let reread = Certificate::from_json(f, &serde_json::from_str(&text)?)?;
            let verified = reread.verify(f).is_ok() && reread == *certificate;
            report.check("certificate verifies after a JSON roundtrip", verified);
            let mut file = cert.clone();
            file["backend"] = serde_json::to_value(&cfg.backend)?;
            report.attachments.insert("certificate".into(), file);
            json!({
                "outcome": "certified",
                "attempts": attempts,
                "certificate": cert,
                "classification": classification.map(|c| c.summary_json()),
            })
        }
        SearchOutcome::ExhaustivelyNone { classification } => {
            json!({ "outcome": "none_exist", "classification": classification.summary_json() })
        }
        SearchOutcome::BudgetExhausted { attempts } => {
            report.check("a certified pair was found within the budget", false);
            json!({ "outcome": "budget_exhausted", "attempts": attempts })
        }
    };
    report.results["signature"] = sig.to_json(f);
    Ok(())
}
