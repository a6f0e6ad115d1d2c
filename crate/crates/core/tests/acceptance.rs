//! End-to-end acceptance run: one line per criterion, non-zero exit if any
//! fails. Runs as a plain binary so the lines always reach the output.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use slitcarpet::carpet::sample::{random_double_point, random_point};
use slitcarpet::carpet::slits_up_to;
use slitcarpet::geodesics::{ball_distances, distance_level, distance_limit, LevelMetric};
use slitcarpet::measure::{
    ahlfors_scan, covering_check, incl_check, measure_comparability, Region, SideFilter, C_CMP,
    C_REG,
};
use slitcarpet::modulus::{
    conductance, laplace_solve, max_residual, modulus_direct, modulus_upper_nonvertical,
    vertical_family_bounds, CurveFamilySpec, Direction, Network,
};
use slitcarpet::symmetry::{
    bilipschitz_bound, bilipschitz_estimate, cohopf_check, h0, h_epsilon,
    isometry_shear_intersection, l_add, random_elements, sample_vertical_curves, shear_apply,
    validate_l, vertical_curve_signature, verttovert_check, Abscissa, Ambient, IsometryElement,
    LFunction, QSElement,
};
use slitcarpet::{CarpetPoint, Dyadic};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(
        elapsed < limit,
        format!(
            "took {:.1}s, limit {}s",
            elapsed.as_secs_f64(),
            limit.as_secs()
        ),
    )
}

fn pt(s: &str) -> CarpetPoint {
    s.parse().expect("valid point literal")
}

fn geometry() -> Outcome {
    let t = Instant::now();
    let s = slits_up_to(3);
    ensure(s.len() == 21, format!("{} slits", s.len()))?;
    let first: Vec<_> = s.generation(1).collect();
    ensure(first.len() == 1, "one generation-1 slit")?;
    let c = first[0];
    ensure(
        c.x == Dyadic::HALF && c.y_lo == Dyadic::new(1, 2) && c.y_hi == Dyadic::new(3, 2),
        format!("central slit at x={} y=({}, {})", c.x, c.y_lo, c.y_hi),
    )?;
    within(t.elapsed(), Duration::from_secs(1))?;
    Ok(format!(
        "21 slits, central slit exact, {:.3}s",
        t.elapsed().as_secs_f64()
    ))
}

fn exact_metric() -> Outcome {
    let t = Instant::now();
    let (p, q) = (pt("1/2,1/2,L"), pt("1/2,1/2,R"));
    let d = distance_level(1, &p, &q).map_err(|e| e.to_string())?.0;
    ensure(d == 0.5, format!("visibility distance {d}"))?;
    let field = ball_distances(1, 10, &p, 1.0).map_err(|e| e.to_string())?;
    let dg = field.get(&q).map_err(|e| e.to_string())?;
    let tol = 2.0 * (-10f64).exp2();
    ensure((dg - 0.5).abs() <= tol, format!("grid distance {dg}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in 0..=3 {
        let m = LevelMetric::shared(n);
        for _ in 0..1000 {
            let [a, b, c] = [(); 3].map(|_| random_point(&mut rng, n, n + 4));
            let dab = m
                .distances_from(&a, &[a, b, c])
                .map_err(|e| e.to_string())?;
            let dba = m.distances_from(&b, &[a, c]).map_err(|e| e.to_string())?;
            ensure(dab[0] == 0.0, format!("d(p,p) = {} at n={n}", dab[0]))?;
            ensure(
                (dab[1] - dba[0]).abs() < 1e-9,
                format!("asymmetric at n={n}: {a} {b}"),
            )?;
            ensure(
                dab[2] <= dab[1] + dba[1] + 1e-9,
                format!("triangle fails at n={n}: {a} {b} {c}"),
            )?;
        }
    }
    within(t.elapsed(), Duration::from_secs(60))?;
    Ok(format!(
        "d=0.5 exact, grid {dg:.6} (tol {tol:.2e}), axioms on 4x1000 triples, {:.1}s",
        t.elapsed().as_secs_f64()
    ))
}

fn monotone_limit() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let p = random_point(&mut rng, 4, 7);
        let q = random_point(&mut rng, 4, 7);
        let seq = distance_limit(&p, &q, 4).map_err(|e| e.to_string())?;
        ensure(
            seq.is_nondecreasing(1e-12),
            format!("decreasing sequence for {p} {q}"),
        )?;
        worst = worst.max(seq.last());
    }
    ensure(worst <= 3.0, format!("limit {worst} exceeds 3"))?;
    Ok(format!(
        "100 pairs nondecreasing, largest d_4 = {worst:.4} <= 3"
    ))
}

fn top_bottom() -> Outcome {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    for n in 0..=4 {
        let g = n + 6;
        let dir = Direction::TB;
        let f = laplace_solve(n, g, &dir.boundary(), 1e-10).map_err(|e| e.to_string())?;
        worst = worst.max((f.energy - 1.0).abs());
        let net = Network::new(n, g).map_err(|e| e.to_string())?;
        let y: Vec<f64> = net
            .nodes()
            .iter()
            .map(|v| v.j as f64 / (1u64 << g) as f64)
            .collect();
        let res = max_residual(&net, &dir.boundary(), &y).map_err(|e| e.to_string())?;
        ensure(res == 0.0, format!("residual of u = y is {res:e} at n={n}"))?;
    }
    ensure(worst < 1e-6, format!("|C_TB - 1| = {worst:e}"))?;
    within(t.elapsed(), Duration::from_secs(120))?;
    Ok(format!(
        "max |C_TB - 1| = {worst:.1e} for n <= 4, u = y exact, {:.1}s",
        t.elapsed().as_secs_f64()
    ))
}

fn left_right() -> Outcome {
    let c = |n, g| conductance(n, g, Direction::LR).map_err(|e| e.to_string());
    let coarse: Vec<f64> = (0..=4).map(|n| c(n, 10)).collect::<Result<_, _>>()?;
    ensure(
        (coarse[0] - 1.0).abs() < 1e-9,
        format!("C_0 = {}", coarse[0]),
    )?;
    ensure(
        coarse.windows(2).all(|w| w[1] < w[0]),
        format!("not strictly decreasing: {coarse:?}"),
    )?;
    let recip: Vec<f64> = coarse.iter().map(|v| 1.0 / v).collect();
    ensure(
        recip.windows(2).all(|w| w[1] >= w[0]),
        "reciprocal decreases",
    )?;
    let mut drift: f64 = 0.0;
    for n in 0..=3 {
        drift = drift.max((c(n, 11)? - coarse[n as usize]).abs());
    }
    ensure(drift < 1e-3, format!("refinement drift {drift:.2e}"))?;
    let shown: Vec<String> = coarse.iter().map(|v| format!("{v:.6}")).collect();
    Ok(format!(
        "C_LR(g=10) = [{}], max drift g=10->11 {drift:.2e} < 1e-3",
        shown.join(", ")
    ))
}

fn nonvertical() -> Outcome {
    let upper: Vec<f64> = (0..=4)
        .map(|n| modulus_upper_nonvertical(1, n, 7))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(
        upper.windows(2).all(|w| w[1] < w[0]),
        format!("bound not strictly decreasing: {upper:?}"),
    )?;
    let mut margin = f64::INFINITY;
    for n in 0..=2 {
        let g = n + 3;
        let bound = modulus_upper_nonvertical(1, n, g).map_err(|e| e.to_string())?;
        let direct =
            modulus_direct(CurveFamilySpec::Oscillation(1), n, g).map_err(|e| e.to_string())?;
        ensure(
            bound >= direct.upper,
            format!("bound {bound} below direct {} at n={n}", direct.upper),
        )?;
        margin = margin.min(bound - direct.upper);
    }
    Ok(format!(
        "bound(n=0..4) = {:.3}..{:.3} decreasing, dominates direct by >= {margin:.3}",
        upper[0], upper[4]
    ))
}

fn vertical() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 0..=2 {
        for g in [n + 3, n + 4] {
            let (lo, hi) = vertical_family_bounds(n, g).map_err(|e| e.to_string())?;
            let e = modulus_direct(CurveFamilySpec::ConnectTB, n, g).map_err(|e| e.to_string())?;
            let gap = (lo - e.lower).max(e.upper - hi).max(0.0);
            ensure(
                gap <= 5e-2,
                format!("[{lo}, {hi}] misses {e:?} at n={n} g={g}"),
            )?;
            worst = worst.max(gap);
        }
    }
    Ok(format!(
        "bounds bracket the direct modulus, worst excess {worst:.1e} <= 5e-2"
    ))
}

fn regularity() -> Outcome {
    let t = Instant::now();
    let radii = [0.25, 0.125, 0.0625];
    let a2 = ahlfors_scan(2, 100, &radii, 7, 8).map_err(|e| e.to_string())?;
    let a3 = ahlfors_scan(3, 100, &radii, 7, 8).map_err(|e| e.to_string())?;
    let drift = (a3.constant() - a2.constant()).abs() / a2.constant();
    ensure(drift < 0.2, format!("Ahlfors drift {drift:.3}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..200 {
        let n = rng.gen_range(1..=3);
        let p = random_point(&mut rng, n, n + 3);
        let r = (-rng.gen_range(0.0..6.0f64)).exp2();
        incl_check(n, &p, r, n + 6).map_err(|e| format!("inclusion at {p} r={r}: {e}"))?;
    }
    let mut cover = 0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=3);
        let p = random_point(&mut rng, n, n + 3);
        let r = (-rng.gen_range(1.0..5.0f64)).exp2();
        let c = covering_check(n, &p, r).map_err(|e| e.to_string())?;
        cover = cover.max(c.count);
    }
    ensure(cover <= C_REG, format!("covering count {cover} > {C_REG}"))?;
    let mut ratio: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=3);
        let g = n + 3;
        let m = 1u32 << g;
        let (i0, j0) = (rng.gen_range(0..m), rng.gen_range(0..m));
        let region = Region {
            g,
            i0,
            i1: rng.gen_range(i0 + 1..=m),
            j0,
            j1: rng.gen_range(j0 + 1..=m),
            sides: SideFilter::Both,
        };
        let c = measure_comparability(n, &region).map_err(|e| e.to_string())?;
        ratio = ratio.max(c.upper).max(c.lower);
    }
    ensure(
        ratio <= C_CMP,
        format!("comparability ratio {ratio} > {C_CMP}"),
    )?;
    within(t.elapsed(), Duration::from_secs(300))?;
    Ok(format!(
        "C(2)={:.3} C(3)={:.3} drift {:.1}%, 200 inclusions, cover <= {cover}, ratio <= {ratio:.3}, {:.1}s",
        a2.constant(),
        a3.constant(),
        100.0 * drift,
        t.elapsed().as_secs_f64()
    ))
}

fn groups() -> Outcome {
    let s2 = IsometryElement::elements(Ambient::S2);
    ensure(s2.len() == 4, format!("|Isom(S2)| = {}", s2.len()))?;
    ensure(
        IsometryElement::R_H == IsometryElement::R_R.compose(IsometryElement::R_V),
        "R_h != R_r R_v",
    )?;
    for a in &s2 {
        for b in &s2 {
            ensure(s2.contains(&a.compose(*b)), "S2 table not closed")?;
        }
    }
    let ds2 = IsometryElement::elements(Ambient::DS2);
    ensure(ds2.len() == 8, format!("|Isom(DS2)| = {}", ds2.len()))?;
    for a in &ds2 {
        ensure(a.compose(*a) == IsometryElement::IDENTITY, "not involutive")?;
        for b in &ds2 {
            ensure(ds2.contains(&a.compose(*b)), "DS2 table not closed")?;
            ensure(a.compose(*b) == b.compose(*a), "not abelian")?;
        }
    }
    let meet = isometry_shear_intersection(Ambient::DS2);
    ensure(
        meet.is_empty(),
        format!("nontrivial isometric shears: {meet:?}"),
    )?;
    Ok("orders 4 and 8, (Z2)^3 laws hold, isometries meet shears trivially".into())
}

fn shears() -> Outcome {
    let lip = validate_l(&h0(), 12).map_err(|e| e.to_string())?;
    ensure(lip == Dyadic::new(2, 0), format!("Lip(h0) = {lip}"))?;
    let mut seen = std::collections::HashSet::new();
    for code in 0u32..1 << 12 {
        let bits: Vec<bool> = (0..12).map(|m| code >> m & 1 == 1).collect();
        let h = h_epsilon(&bits).map_err(|e| e.to_string())?;
        validate_l(&h, h.breakpoint_exponent()).map_err(|e| format!("{code:012b}: {e}"))?;
        ensure(
            seen.insert(h.simplify().to_string()),
            format!("{code:012b} repeats"),
        )?;
    }
    let elems = random_elements(40, 10);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for i in 0..1000 {
        let (h1, h2) = (&elems[i % 40].shear, &elems[(i * 7 + 3) % 40].shear);
        let p = random_double_point(&mut rng, 4, 10);
        let lhs = shear_apply(h1, &shear_apply(h2, &p).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let rhs = shear_apply(&l_add(h1, h2), &p).map_err(|e| e.to_string())?;
        ensure(
            lhs == rhs,
            format!("composition differs at {p}: {lhs} vs {rhs}"),
        )?;
    }
    Ok("Lip(h0) = 2, 4096 binary shears valid and distinct, composition on 1000 points".into())
}

fn bilipschitz() -> Outcome {
    let t = Instant::now();
    let g = QSElement::new(IsometryElement::IDENTITY, h0());
    let bound = bilipschitz_bound(&g) + 0.05;
    let (max, min) = bilipschitz_estimate(&g, 3, 10_000, 11).map_err(|e| e.to_string())?;
    ensure(max <= bound, format!("max ratio {max} > {bound}"))?;
    ensure(
        min >= 1.0 / bound,
        format!("min ratio {min} < {}", 1.0 / bound),
    )?;
    within(t.elapsed(), Duration::from_secs(300))?;
    Ok(format!(
        "ratios in [{min:.4}, {max:.4}] within [{:.4}, {bound:.4}], {:.1}s",
        1.0 / bound,
        t.elapsed().as_secs_f64()
    ))
}

fn cohopf() -> Outcome {
    let mut elems = vec![
        QSElement::identity(),
        QSElement::new(IsometryElement::IDENTITY, h0()),
    ];
    elems.extend(
        IsometryElement::elements(Ambient::DS2)
            .into_iter()
            .map(|i| QSElement::new(i, LFunction::zero())),
    );
    elems.extend(random_elements(50, 12));
    for g in &elems {
        let ok = cohopf_check(g, 4).map_err(|e| e.to_string())?;
        ensure(ok, format!("not a bijection on level-4 slits: {g}"))?;
    }
    let half = Abscissa::Dyadic(Dyadic::HALF);
    let sig = vertical_curve_signature(half).map_err(|e| e.to_string())?;
    ensure(sig.curve_count() == Some(4), format!("{sig}"))?;
    Ok(format!(
        "{} elements biject level-4 slits, 4 closed curves at x = 1/2",
        elems.len()
    ))
}

fn verttovert() -> Outcome {
    let curves = sample_vertical_curves(3, 100, 13);
    ensure(curves.len() == 100, format!("{} curves", curves.len()))?;
    for g in random_elements(20, 13) {
        let ok = verttovert_check(&g, &curves).map_err(|e| e.to_string())?;
        ensure(ok, format!("{g} moves a vertical curve off the vertical"))?;
    }
    Ok("100 curves stay vertical under 20 elements".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("exact geometry", geometry),
        ("exact metric", exact_metric),
        ("monotone limit", monotone_limit),
        ("top-bottom conductance", top_bottom),
        ("left-right conductance", left_right),
        ("non-vertical bound", nonvertical),
        ("vertical family", vertical),
        ("regularity", regularity),
        ("isometry groups", groups),
        ("shear functions", shears),
        ("bi-Lipschitz bound", bilipschitz),
        ("co-Hopfian witness", cohopf),
        ("vertical preservation", verttovert),
    ];
    let only: Option<usize> = std::env::args().nth(1).and_then(|a| a.parse().ok());
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let k = i + 1;
        if only.is_some_and(|o| o != k) {
            continue;
        }
        let t = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {k:2} PASS {name}: {msg} [{secs:.1}s]"),
            Err(msg) => {
                failed += 1;
                println!("criterion {k:2} FAIL {name}: {msg} [{secs:.1}s]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
