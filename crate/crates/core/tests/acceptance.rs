//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::time::{Duration, Instant};

use bicycle::caps::Caps;
use bicycle::gaussian::GaussianInteger;
use bicycle::gf2::BitMatrix;
use bicycle::graph::graph_iso_capped;
use bicycle::profile::{brute_matroid_iso, experiment, extension_census, pedestrian_limit, profile, sample_rng};
use bicycle::projection::{projection_graph, projector, reduced_graph, reduced_projector};
use bicycle::qform::{brown_sum_oracle, compute_q_basis, compute_q_basis_randomized, FormKind, QBasis};
use bicycle::subspace::Subspace;
use bicycle::tripartition::{tripartition_fast, tripartition_oracle};
use bicycle::tutte::{brute_force_tutte_at_point, evaluate, evaluate_via_dual, greene_sum_check};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

type Check = Result<String, String>;

fn exhaustive(max_n: usize) -> Vec<Subspace> {
    (0..=max_n).flat_map(Subspace::enumerate_all).collect()
}

/// `count` seeded spaces with 1 <= n <= max_n and uniform 0 <= k <= n.
fn random_spaces(seed: u64, count: u64, max_n: usize) -> Vec<Subspace> {
    (0..count)
        .map(|i| {
            let mut rng = sample_rng(seed, i);
            let n = rng.gen_range(1..=max_n);
            let k = rng.gen_range(0..=n);
            Subspace::random_with(n, k, &mut rng).unwrap()
        })
        .collect()
}

/// Every subspace with n <= 5 followed by 1000 random spaces with n <= 12.
fn corpus() -> (Vec<Subspace>, usize) {
    let mut c = exhaustive(5);
    let small = c.len();
    c.extend(random_spaces(1, 1000, 12));
    (c, small)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn closed_form(corpus: &[Subspace], small: usize) -> Check {
    ensure(small == 465, || {
        format!("expected 465 subspaces with n <= 5, enumerated {small}")
    })?;
    for v in corpus {
        let brute = brute_force_tutte_at_point(v).map_err(|e| e.to_string())?;
        let fast = evaluate(v);
        ensure(fast.to_gaussian().as_ref() == Some(&brute), || {
            format!("{v:?}: {fast} vs {brute}")
        })?;
    }
    Ok(format!("{} spaces ({small} exhaustive with n <= 5)", corpus.len()))
}

fn greene(corpus: &[Subspace]) -> Check {
    for v in corpus {
        let (lhs, rhs) = greene_sum_check(v).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || format!("{v:?}: {lhs} vs {rhs}"))?;
    }
    Ok(format!("{} spaces", corpus.len()))
}

fn brown_holds(qb: &QBasis) -> Result<bool, String> {
    if !qb.bicycle_q_vanishes() {
        return Ok(false);
    }
    let sigma = qb.brown_sigma().map_err(|e| e.to_string())?;
    let sum = brown_sum_oracle(&qb.free_span()).map_err(|e| e.to_string())?;
    let expected = GaussianInteger::from_polar((qb.dim() - qb.d()) as u32, sigma)
        .ok_or_else(|| format!("sigma {sigma} has the wrong parity for free rank {}", qb.dim() - qb.d()))?;
    ensure(sum == expected, || format!("direct sum {sum}, closed form {expected}"))?;
    Ok(true)
}

fn brown(corpus: &[Subspace]) -> Check {
    let mut checked = 0;
    for v in corpus {
        if brown_holds(&compute_q_basis(v)).map_err(|e| format!("{v:?}: {e}"))? {
            checked += 1;
        }
    }
    let pair = |n: usize, rows: &[&[u8]]| Subspace::from_rows(&BitMatrix::from_bits(n, rows).unwrap());
    // symplectic pairs with q = (0, 0) and q = (2, 2)
    let p00 = pair(7, &[&[1, 1, 1, 1, 0, 0, 0], &[0, 0, 0, 1, 1, 1, 1]]);
    let p22 = pair(3, &[&[1, 1, 0], &[0, 1, 1]]);
    for (v, sigma, sum) in [
        (&p00, 0u8, GaussianInteger::new(2, 0)),
        (&p22, 4, GaussianInteger::new(-2, 0)),
    ] {
        let qb = compute_q_basis(v);
        ensure(qb.brown_sigma() == Ok(sigma), || {
            format!("{v:?}: sigma {:?}, expected {sigma}", qb.brown_sigma())
        })?;
        let direct = brown_sum_oracle(v).map_err(|e| e.to_string())?;
        ensure(direct == sum, || {
            format!("{v:?}: four-term sum {direct}, expected {sum}")
        })?;
        brown_holds(&qb)?;
    }
    Ok(format!(
        "{checked} q-bases with vanishing bicycle q, plus the (0,0) and (2,2) pairs"
    ))
}

fn modulus(corpus: &[Subspace]) -> Check {
    let mut nonzero = 0;
    for v in corpus {
        let brute = brute_force_tutte_at_point(v).map_err(|e| e.to_string())?;
        if !brute.is_zero() {
            nonzero += 1;
            let expected = BigInt::from(1) << v.bicycle_dimension();
            ensure(brute.norm_sqr() == expected, || {
                format!("{v:?}: |T|^2 = {}", brute.norm_sqr())
            })?;
        }
    }
    Ok(format!("{nonzero} nonzero values"))
}

fn duality(corpus: &[Subspace]) -> Check {
    for v in corpus {
        ensure(evaluate_via_dual(v) == evaluate(v), || format!("{v:?}"))?;
    }
    Ok(format!("{} spaces", corpus.len()))
}

fn tripartition() -> Check {
    let mut spaces = exhaustive(5);
    spaces.extend(random_spaces(6, 1000, 14));
    for v in &spaces {
        let slow = tripartition_oracle(v).map_err(|e| format!("{v:?}: {e}"))?;
        let fast = tripartition_fast(&compute_q_basis(v), v).map_err(|e| e.to_string())?;
        ensure(fast == slow, || format!("{v:?}: fast {fast:?}, oracle {slow:?}"))?;
    }
    Ok(format!("{} spaces", spaces.len()))
}

fn projection() -> Check {
    let mut pedestrian = 0;
    for v in exhaustive(5).iter().filter(|v| v.is_pedestrian()) {
        pedestrian += 1;
        let q = projector(&compute_q_basis(v)).map_err(|e| e.to_string())?;
        let m = q.matrix();
        ensure(m.is_symmetric(), || format!("{v:?}: not symmetric"))?;
        ensure(m.mul(m).as_ref() == Ok(m), || format!("{v:?}: not idempotent"))?;
        for x in v.basis().row_vectors() {
            ensure(m.apply(x).as_ref() == Ok(x), || format!("{v:?}: moves {x}"))?;
        }
        for y in v.dual().basis().row_vectors() {
            ensure(m.apply(y).is_ok_and(|z| z.is_zero()), || format!("{v:?}: keeps {y}"))?;
        }
    }
    let spaces = random_spaces(7, 200, 14);
    for (i, v) in spaces.iter().enumerate() {
        let base = reduced_projector(&compute_q_basis(v));
        let other = reduced_projector(&compute_q_basis_randomized(v, &mut sample_rng(70, i as u64)));
        ensure(base == other, || format!("{v:?}: Q[F,F] depends on the complement"))?;
    }
    Ok(format!("{pedestrian} pedestrian spaces, 200 randomized recomputations"))
}

fn iff_theorem() -> Check {
    let pedestrian: Vec<Subspace> = Subspace::enumerate_all(4)
        .into_iter()
        .filter(Subspace::is_pedestrian)
        .collect();
    let graphs: Vec<_> = pedestrian.iter().map(|v| projection_graph(v).unwrap()).collect();
    let mut pairs = 0;
    for (i, v) in pedestrian.iter().enumerate() {
        for (j, w) in pedestrian.iter().enumerate() {
            pairs += 1;
            let matroid = brute_matroid_iso(v, w).map_err(|e| e.to_string())?;
            let graph = graph_iso_capped(&graphs[i], &graphs[j], usize::MAX).map_err(|e| e.to_string())?;
            ensure(matroid == graph, || {
                format!("{v:?} vs {w:?}: matroid iso {matroid}, graph iso {graph}")
            })?;
        }
    }
    let mut all_pairs = 0;
    for n in 0..=4 {
        let spaces = Subspace::enumerate_all(n);
        let graphs: Vec<_> = spaces.iter().map(reduced_graph).collect();
        for (i, v) in spaces.iter().enumerate() {
            for (j, w) in spaces.iter().enumerate() {
                all_pairs += 1;
                if brute_matroid_iso(v, w).map_err(|e| e.to_string())? {
                    let graph = graph_iso_capped(&graphs[i], &graphs[j], usize::MAX).map_err(|e| e.to_string())?;
                    ensure(graph, || {
                        format!("{v:?} vs {w:?}: isomorphic matroids, reduced graphs differ")
                    })?;
                }
            }
        }
    }
    Ok(format!(
        "{pairs} pedestrian pairs at n = 4, {all_pairs} pairs at n <= 4"
    ))
}

fn census() -> Check {
    let mut split_failures = Vec::new();
    for i in 0..200u64 {
        let mut rng = sample_rng(9, i);
        let n = rng.gen_range(1..=10);
        let k = rng.gen_range(0..=n.min(6));
        let w = Subspace::random_with(n, k, &mut rng).unwrap();
        let c = extension_census(&w).map_err(|e| e.to_string())?;
        let (k, d) = (k as u32, w.bicycle_dimension() as u32);
        let down = (1u64 << k) - (1u64 << (k - d));
        ensure(c.down == down, || format!("{w:?}: down {} expected {down}", c.down))?;
        // The remaining 2^{k-d} lifts split evenly exactly when the free part
        // of the form is orthogonal; an alternating or empty free part keeps d.
        let orthogonal = compute_q_basis(&w).kind() == FormKind::Orthogonal;
        let rest = 1u64 << (k - d);
        let corrected = if orthogonal { (rest / 2, rest / 2) } else { (rest, 0) };
        ensure((c.same, c.up) == corrected, || {
            format!("{w:?}: same {} up {}, expected {corrected:?}", c.same, c.up)
        })?;
        if k > d && (c.same, c.up) != (rest / 2, rest / 2) {
            split_failures.push(w);
        }
    }
    match split_failures.first() {
        None => Ok("200 random W: down count exact, remaining lifts split evenly".into()),
        Some(w) => Err(format!(
            "down count exact on 200 random W; the even same/up split with k > d(W) fails on {} of them \
             (first: {w:?}, whose free form is alternating); same = 2^(k-d), up = 0 holds for every \
             alternating free form and the even split for every orthogonal one",
            split_failures.len()
        )),
    }
}

fn pedestrian_density() -> Check {
    let mut parts = Vec::new();
    for seed in [1u64, 2, 3] {
        let r = experiment(30, 10, 10_000, seed, &Caps::default()).map_err(|e| e.to_string())?;
        let fraction = *r.pedestrian_fraction().numer() as f64 / *r.pedestrian_fraction().denom() as f64;
        ensure((0.40..=0.44).contains(&fraction), || {
            format!("seed {seed}: pedestrian fraction {fraction:.4}")
        })?;
        let resolved = r.resolved_fraction();
        ensure(resolved * 1000u64 >= (999u64).into(), || {
            format!("seed {seed}: {} of {} pairs unknown", r.unknown, r.pairs)
        })?;
        parts.push(format!(
            "seed {seed}: {fraction:.4}, {} unknown of {} pairs",
            r.unknown, r.pairs
        ));
    }
    Ok(format!("{} (chain limit {:.4})", parts.join("; "), pedestrian_limit()))
}

fn timed(n: usize, k: usize, seed: u64) -> Duration {
    let v = Subspace::random(n, k, seed).unwrap();
    let start = Instant::now();
    let value = evaluate(&v);
    let elapsed = start.elapsed();
    std::hint::black_box(value);
    elapsed
}

fn complexity() -> Check {
    let best = |k: usize| (0..2).map(|s| timed(10_000, k, s)).min().unwrap();
    let t1 = best(1000);
    let t2 = best(2000);
    let ratio = t2.as_secs_f64() / t1.as_secs_f64().max(1e-9);
    ensure(ratio <= 5.0, || {
        format!("k = 1000: {t1:?}, k = 2000: {t2:?}, ratio {ratio:.2}")
    })?;
    Ok(format!("k = 1000: {t1:.2?}, k = 2000: {t2:.2?}, ratio {ratio:.2}"))
}

fn permutation_invariance() -> Check {
    let spaces = random_spaces(12, 500, 16);
    for (i, v) in spaces.iter().enumerate() {
        let mut perm: Vec<usize> = (0..v.ground_size()).collect();
        perm.shuffle(&mut sample_rng(120, i as u64));
        let moved = v.permute(&perm).unwrap();
        ensure(profile(&moved) == profile(v), || format!("{v:?} under {perm:?}"))?;
    }
    Ok("500 random (V, permutation) pairs".into())
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn main() {
    let (corpus, small) = corpus();
    let criteria: Vec<Criterion> = vec![
        (
            "closed form equals subset expansion",
            Box::new(|| closed_form(&corpus, small)),
        ),
        ("Greene identity", Box::new(|| greene(&corpus))),
        ("Brown identity", Box::new(|| brown(&corpus))),
        ("modulus law", Box::new(|| modulus(&corpus))),
        ("duality", Box::new(|| duality(&corpus))),
        (
            "tripartition fast path equals contraction oracle",
            Box::new(tripartition),
        ),
        ("projector properties and complement independence", Box::new(projection)),
        ("projection graph isomorphism theorem", Box::new(iff_theorem)),
        ("coextension census", Box::new(census)),
        ("pedestrian fraction and pair resolution", Box::new(pedestrian_density)),
        ("complexity smoke test", Box::new(complexity)),
        ("profile permutation invariance", Box::new(permutation_invariance)),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{elapsed:.1?}]", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {detail} [{elapsed:.1?}]", i + 1);
            }
        }
    }
    if failures > 0 {
        eprintln!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
