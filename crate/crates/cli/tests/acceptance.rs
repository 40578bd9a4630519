//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. All comparisons are exact.

use std::path::PathBuf;
use std::time::Instant;

use anyhow::{ensure, Context, Result};
use opgraph::constructions::{
    conjugation_automorphism, delta_automorphism, induced_subgroup, obstruction_witness, sd_group, swap_construction,
    unitary_generators, UnitaryMap,
};
use opgraph::graph::{
    automorphism_group, brute_force_automorphisms, build_graph, compare_partitions, enumerate_flags, fiber_partition,
    fixtures, ij_components, is_automorphism, johnson_automorphisms, johnson_graph, LabeledGraph, SearchLimits,
    SimpleGraph,
};
use opgraph::linalg::{Matrix, Subspace};
use opgraph::spectral::{
    a1_check, a2_check, assemble_matrix, classify_pairs, counterexample_search, geometric_adjacency, Certificate,
    ClassSignature, EigenFlag, IndexPair, SearchBudget, SearchOutcome,
};
use opgraph::starfield::{GaussianRational as G, GaussianRationals, GfElem, GfSquare, StarField};
use opgraph_cli::commands::execute;
use opgraph_cli::config::ExperimentConfig;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn gf9() -> GfSquare {
    GfSquare::new(3, 1).expect("GF(9)")
}

fn gf9_signature(sigma: &[usize], dims: &[usize]) -> Result<ClassSignature<GfElem>> {
    let f = gf9();
    let fixed = f.fixed_elements().context("finite")?;
    Ok(ClassSignature::new(&f, sigma.iter().map(|&k| fixed[k]).collect(), dims.to_vec())?)
}

fn gf9_graph(sigma: &[usize], dims: &[usize]) -> Result<LabeledGraph<GfElem>> {
    let f = gf9();
    Ok(build_graph(&f, enumerate_flags(&f, &gf9_signature(sigma, dims)?)?)?)
}

fn qi_signature(dims: &[usize]) -> Result<ClassSignature<G>> {
    let sigma = (1..=dims.len() as i64).map(|k| G::integer(k, 0)).collect();
    Ok(ClassSignature::new(&GaussianRationals, sigma, dims.to_vec())?)
}

fn line(v: &[i64]) -> Result<Subspace<G>> {
    Ok(Subspace::span(&GaussianRationals, v.len(), vec![v.iter().map(|&x| G::integer(x, 0)).collect()])?)
}

fn qi_flag(sig: &ClassSignature<G>, lines: &[&[i64]]) -> Result<EigenFlag<G>> {
    let spaces = lines.iter().map(|v| line(v)).collect::<Result<Vec<_>>>()?;
    Ok(EigenFlag::new(&GaussianRationals, sig.clone(), spaces)?)
}

fn pair(i: usize, j: usize) -> IndexPair {
    IndexPair::new(i, j).expect("distinct")
}

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn equivalence() -> Result<String> {
    let f = gf9();
    let start = Instant::now();
    let flags = enumerate_flags(&f, &gf9_signature(&[0, 1, 2], &[1, 1, 1])?)?;
    let c = classify_pairs(&f, &flags)?;
    ensure!(flags.len() == 378, "{} flags", flags.len());
    ensure!(c.pairs == 71_253, "{} pairs", c.pairs);
    ensure!(c.discrepancies.is_empty(), "{} discrepancies", c.discrepancies.len());
    Ok(format!(
        "{} pairs, A1∧A2 {}, A1∧¬A2 {}, ¬A1 {}, 0 discrepancies, {:.1}s",
        c.pairs,
        c.a1_a2,
        c.a1_not_a2,
        c.not_a1,
        start.elapsed().as_secs_f64()
    ))
}

fn two_slot_collapse() -> Result<String> {
    let g = gf9_graph(&[0, 1], &[1, 2])?;
    let c = g.classification();
    ensure!(g.len() == 63, "{} vertices", g.len());
    ensure!(c.a1_not_a2 == 0, "{} pairs with A1 but not A2", c.a1_not_a2);
    ensure!(c.discrepancies.is_empty(), "discrepancies");
    ensure!(g.graph().is_complete(), "graph is not complete");
    Ok(format!("63 vertices, {} pairs, 0 violations, complete", c.pairs))
}

fn qi_examples() -> Result<String> {
    let f = GaussianRationals;
    let sig = qi_signature(&[1, 1, 1])?;
    let a = EigenFlag::coordinate(&f, sig.clone());
    ensure!(assemble_matrix(&f, &a) == Matrix::diagonal(&f, &[G::integer(1, 0), G::integer(2, 0), G::integer(3, 0)]));

    let rotated = qi_flag(&sig, &[&[1, 1, 0], &[1, -1, 0], &[0, 0, 1]])?;
    let half = G::ratio(1, 2);
    let mhalf = G::ratio(-1, 2);
    let z = G::integer(0, 0);
    let expected = Matrix::from_rows(
        vec![vec![half.clone(), mhalf.clone(), z.clone()], vec![mhalf.clone(), mhalf, z.clone()], vec![z.clone(), z.clone(), z]],
        3,
    );
    let d = assemble_matrix(&f, &rotated).sub(&f, &assemble_matrix(&f, &a))?;
    ensure!(d == expected, "rotated difference {d:?}");
    ensure!(a1_check(&f, &a, &rotated)? && a2_check(&f, &a, &rotated)?, "rotated pair");
    ensure!(geometric_adjacency(&f, &a, &rotated)? == Some(pair(0, 1)), "rotated type");

    let cycled = qi_flag(&sig, &[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]])?;
    let d = assemble_matrix(&f, &cycled).sub(&f, &assemble_matrix(&f, &a))?;
    ensure!(d == Matrix::diagonal(&f, &[G::integer(2, 0), G::integer(-1, 0), G::integer(-1, 0)]), "cycled difference");
    ensure!(d.rank(&f) == 3 && !a1_check(&f, &a, &cycled)?, "cycled pair");

    let swapped = qi_flag(&sig, &[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]])?;
    ensure!(geometric_adjacency(&f, &a, &swapped)? == Some(pair(0, 1)), "swapped type");
    Ok("rotated: A1 with difference [[1/2,-1/2,0],[-1/2,-1/2,0],0], type {1,2}; cycled: rank 3; swapped: type {1,2}".into())
}

fn counterexample() -> Result<String> {
    let f = gf9();
    let sig = gf9_signature(&[0, 1, 2], &[1, 1, 1])?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let gf_line = match counterexample_search(&f, &sig, SearchBudget::default(), &mut rng)? {
        SearchOutcome::Certified { certificate, classification, .. } => {
            let json = certificate.to_json(&f);
            let back = Certificate::from_json(&f, &serde_json::from_str(&serde_json::to_string(&json)?)?)?;
            back.verify(&f).context("GF(9) certificate rejected after roundtrip")?;
            let count = classification.map(|c| c.a1_not_a2).unwrap_or(0);
            format!("GF(9)³ certified ({count} such pairs)")
        }
        SearchOutcome::ExhaustivelyNone { .. } => "GF(9)³ exhaustively none".to_string(),
        SearchOutcome::BudgetExhausted { .. } => anyhow::bail!("finite search cannot exhaust a budget"),
    };

    let q = GaussianRationals;
    let sig = qi_signature(&[1, 1, 1])?;
    let budget = SearchBudget { max_attempts: 10_000, max_seconds: 60.0, height: 4 };
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let start = Instant::now();
    let outcome = counterexample_search(&q, &sig, budget, &mut rng)?;
    let elapsed = start.elapsed().as_secs_f64();
    let SearchOutcome::Certified { certificate, attempts, .. } = outcome else {
        anyhow::bail!("ℚ(i) search found nothing within the budget");
    };
    let json = certificate.to_json(&q);
    let back = Certificate::from_json(&q, &serde_json::from_str(&serde_json::to_string(&json)?)?)?;
    back.verify(&q).context("ℚ(i) certificate rejected after roundtrip")?;
    ensure!(a1_check(&q, &back.a, &back.b)? && !a2_check(&q, &back.a, &back.b)?, "predicates disagree with certificate");
    ensure!(elapsed < 60.0, "ℚ(i) search took {elapsed:.1}s");
    Ok(format!("{gf_line}; ℚ(i)³ certified after {attempts} attempt(s) in {elapsed:.2}s"))
}

fn components() -> Result<String> {
    let f = gf9();
    let g = gf9_graph(&[0, 1, 2], &[1, 1, 1])?;
    let comps = ij_components(&g, pair(0, 1));
    let cmp = compare_partitions(&comps, &fiber_partition(&f, &g, 0, 1)?);
    let back = compare_partitions(&comps, &fiber_partition(&f, &g, 1, 0)?);
    ensure!(cmp.refines && back.refines, "a component leaves its fiber");
    ensure!(cmp.coarse_blocks == 63 && cmp.coarse_sizes.get(&6) == Some(&63), "fibers {:?}", cmp.coarse_sizes);

    // the reports must flag failures of the complex-analog statements with exit code 2
    let mut flags = Vec::new();
    for (name, expect_pass) in [
        ("gf9_components_ij.json", cmp.equal),
        ("gf9_components_global.json", opgraph::graph::connected_components(g.graph()).len() == 1),
    ] {
        let report = execute(&ExperimentConfig::load(&fixtures_dir().join(name))?)?;
        ensure!(report.exit_code() == if expect_pass { 0 } else { 2 }, "{name}: exit code {}", report.exit_code());
        flags.push(format!("{name}: {}", report.to_json()["status"]));
    }
    Ok(format!(
        "components ⊆ fibers; 63 fibers of size 6; components = fibers: {}; {}",
        cmp.equal,
        flags.join(", ")
    ))
}

fn johnson() -> Result<String> {
    let mut parts = Vec::new();
    for (k, expected) in [(3, "6"), (4, "48"), (5, "120")] {
        let c = johnson_automorphisms(&johnson_graph(k)?)?;
        ensure!(c.group.order.to_string() == expected, "J({k},2): {}", c.group.order);
        let brute = c.brute_force_order.context("brute force ran")?;
        ensure!(brute.to_string() == expected, "J({k},2) brute force {brute}");
        ensure!(c.other == 0, "unclassified automorphisms of J({k},2)");
        if k == 4 {
            ensure!(c.complement_composed == 24 && c.permutation_induced == 24, "J(4,2) split");
        } else {
            ensure!(c.complement_composed == 0, "complement map outside |I| = 4");
        }
        parts.push(format!("J({k},2) {expected}"));
    }
    Ok(format!("{}; J(4,2) = 24 permutation-induced + 24 complement-composed", parts.join(", ")))
}

fn engine() -> Result<String> {
    for (name, g, expected) in
        [("K4", fixtures::complete(4), "24"), ("C5", fixtures::cycle(5), "10"), ("Petersen", fixtures::petersen(), "120")]
    {
        let order = automorphism_group(&g, SearchLimits::default())?.order.to_string();
        ensure!(order == expected, "{name}: {order}");
    }
    let mut small: Vec<(String, SimpleGraph)> = vec![
        ("K4".into(), fixtures::complete(4)),
        ("C5".into(), fixtures::cycle(5)),
        ("cube".into(), fixtures::cube()),
        ("prism".into(), fixtures::prism()),
        ("P6".into(), fixtures::path(6)),
        ("star5".into(), fixtures::star(5)),
        ("K33".into(), fixtures::complete_bipartite(3, 3)),
        ("C8".into(), fixtures::cycle(8)),
        ("K8".into(), fixtures::complete(8)),
        ("empty7".into(), SimpleGraph::new(7)),
    ];
    for seed in 0..12 {
        small.push((format!("random{seed}"), fixtures::random(5 + (seed as usize % 4), 0.45, seed)));
    }
    for (name, g) in &small {
        let engine = automorphism_group(g, SearchLimits::default())?;
        let brute = brute_force_automorphisms(g);
        ensure!(engine.order.to_string() == brute.len().to_string(), "{name}: engine {} brute {}", engine.order, brute.len());
        ensure!(brute.iter().all(|p| engine.contains(p)), "{name}: engine group misses an automorphism");
    }
    Ok(format!("K4 24, C5 10, Petersen 120; brute force agrees on {} graphs with ≤ 8 vertices", small.len()))
}

fn induced() -> Result<String> {
    let f = gf9();
    let g = gf9_graph(&[0, 1, 2], &[1, 1, 1])?;
    let unitaries = unitary_generators(&f, 3)?;
    for u in &unitaries {
        let p = conjugation_automorphism(&f, &g, u, false)?;
        ensure!(is_automorphism(g.graph(), &p), "unitary generator");
    }
    let galois = conjugation_automorphism(&f, &g, &UnitaryMap::identity(&f, 3), true)?;
    ensure!(is_automorphism(g.graph(), &galois), "Galois map");
    let deltas = sd_group(g.signature().context("vertices")?);
    ensure!(deltas.len() == 6, "{} slot permutations", deltas.len());
    for d in &deltas {
        ensure!(is_automorphism(g.graph(), &delta_automorphism(&g, d)?), "delta {}", d.display());
    }
    let aut = automorphism_group(g.graph(), SearchLimits::default())?;
    let sub = induced_subgroup(&f, &g, &unitaries)?;
    ensure!(sub.generators.iter().all(|x| aut.contains(&x.perm)), "induced map outside Aut");
    let ratio = sub.index_in(&aut.order).context("induced order divides |Aut|")?;
    Ok(format!(
        "{} isometry generators, Galois map and 6 slot permutations are automorphisms; induced order {}, |Aut| {}, ratio {ratio}",
        unitaries.len(),
        sub.order(),
        aut.order
    ))
}

fn constructions() -> Result<String> {
    let q = GaussianRationals;
    let sig = qi_signature(&[1, 1, 1, 1])?;
    let a = EigenFlag::coordinate(&q, sig.clone());
    let b = qi_flag(&sig, &[&[1, 1, 0, 0], &[1, -1, 0, 0], &[0, 0, 1, 1], &[0, 0, 1, -1]])?;
    let c = qi_flag(&sig, &[&[1, 1, 0, 0], &[1, -1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]])?;
    let c2 = swap_construction(&q, &a, &b, &c, pair(0, 1), pair(2, 3))?;
    let expected = qi_flag(&sig, &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 1], &[0, 0, 1, -1]])?;
    ensure!(c2 == expected, "C' does not mix the other pair");
    ensure!(swap_construction(&q, &a, &b, &c2, pair(2, 3), pair(0, 1))? == c, "second swap does not return C");
    let bad = swap_construction(&q, &a, &b, &a, pair(0, 1), pair(2, 3));
    ensure!(bad.is_err(), "non-adjacent C accepted");

    let sig3 = qi_signature(&[1, 1, 1])?;
    let a3 = EigenFlag::coordinate(&q, sig3);
    let w = obstruction_witness(&q, &a3, 0, 1, 2)?;
    ensure!(w.p == line(&[0, 1, 0])?, "P");
    ensure!(w.y_i == line(&[1, 1, 0])?, "Y_1");
    ensure!(w.q == line(&[1, -1, 0])?, "Q");
    ensure!(w.y_t.contains(&q, &w.q)?, "Y_3 does not contain Q");
    ensure!(w.all_claims_hold(), "ℚ(i) claims: {:?}", w.claims);
    ensure!(obstruction_witness(&q, &a3, 0, 0, 2).is_err(), "i = j accepted");

    let f = gf9();
    let a9 = EigenFlag::coordinate(&f, gf9_signature(&[0, 1, 2], &[1, 1, 1])?);
    let w9 = obstruction_witness(&f, &a9, 0, 1, 2)?;
    ensure!(w9.all_claims_hold(), "GF(9) claims: {:?}", w9.claims);
    ensure!(w9.nonexistence == ("exhaustive".to_string(), Some(378)), "{:?}", w9.nonexistence);
    Ok(format!(
        "swap on ℚ(i)⁴ verified and involutive; ℚ(i)³ obstruction P=⟨e2⟩, Y1=⟨(1,1,0)⟩, Q=⟨(1,-1,0)⟩ with {} claims; GF(9)³ non-existence over 378 flags",
        w.claims.len()
    ))
}

fn relabel() -> Result<String> {
    let g = gf9_graph(&[0, 1, 2], &[1, 1, 1])?;
    let h = gf9_graph(&[1, 2, 0], &[1, 1, 1])?;
    ensure!(g.len() == h.len(), "vertex counts");
    let by_spaces = |x: &LabeledGraph<GfElem>, v: usize| x.vertex(v).spaces().to_vec();
    let edges = |x: &LabeledGraph<GfElem>| {
        let mut e: Vec<_> = x
            .graph()
            .edges()
            .map(|(u, v)| {
                let (a, b) = (by_spaces(x, u), by_spaces(x, v));
                if a < b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        e.sort();
        e
    };
    let (eg, eh) = (edges(&g), edges(&h));
    ensure!(eg == eh, "edge sets differ");
    Ok(format!("{} edges identical under the identity flag correspondence", eg.len()))
}

fn determinism() -> Result<String> {
    let mut configs: Vec<PathBuf> = std::fs::read_dir(fixtures_dir())?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    configs.retain(|p| !p.file_name().unwrap().to_string_lossy().starts_with("qi_pair_"));
    configs.sort();
    for path in &configs {
        let cfg = ExperimentConfig::load(path)?;
        let first = execute(&cfg)?.deterministic_json();
        let second = execute(&cfg)?.deterministic_json();
        ensure!(first == second, "{} differs between runs", path.display());
    }
    Ok(format!("{} fixture configs produce byte-identical reports", configs.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Result<String>); 11] = [
        ("adjacency equivalence on GF(9)³", equivalence),
        ("two-eigenvalue collapse and completeness", two_slot_collapse),
        ("ℚ(i) diag(1,2,3) examples", qi_examples),
        ("certified counterexample to (A2)", counterexample),
        ("component structure", components),
        ("Johnson layer", johnson),
        ("engine fixtures", engine),
        ("induced generators", induced),
        ("swap and obstruction constructions", constructions),
        ("eigenvalue relabeling", relabel),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err(anyhow::anyhow!("panicked")));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.1}s): {detail}", k + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.1}s): {e:#}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
