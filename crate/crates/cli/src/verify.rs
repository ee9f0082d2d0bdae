//! The self-verification suites: each re-derives a family of counts or
//! structural facts two independent ways and reports per-check results.
//!
//! Output is deterministic for a fixed seed and parameter set: JSON detail
//! on stdout, a human-readable summary on stderr.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use frieze_core::{
    aux_graph_counts, count_paths, count_w, count_x, count_y, count_z, count_z_t, crt_iso_alpha,
    crt_iso_beta, enumerate_omega, enumerate_paths, has_liftable_subpath, is_omega_path,
    lift_paths, middle_vertex, pathcount::PathCountError, phi_field, phi_m, reference_window_z5,
    regular_count_formula, render_from_path, sl2_order, tame_count_field, tame_count_formula,
    tensor_product, totient, valuation, z_closed_form, FareyGraph, FriezeError, FriezeKind,
    FriezeWindow, LiftAnchor, Path, Valuation, Vertex,
};

use crate::cache::CountCache;
use crate::commands::formula_count;
use crate::{bounds, usage_error, SuiteArg};

/// Parameter set echoed in every suite report.
#[derive(Serialize, Clone, Debug)]
pub struct SuiteParams {
    pub n_max: u32,
    pub m_max: u32,
    pub primes: Vec<u64>,
    pub r_max: u32,
    pub k_max: u32,
    pub samples: u32,
}

/// One verified fact: a stable name, the outcome, and a short description of
/// what was compared.
#[derive(Serialize, Debug)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// The report for a single suite.
#[derive(Serialize, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub params: SuiteParams,
    pub checks: Vec<CheckResult>,
    pub passed: usize,
    pub failed: usize,
    pub ok: bool,
}

/// The umbrella report for `--suite all`.
#[derive(Serialize, Debug)]
pub struct AllReport {
    pub suite: String,
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
    pub passed: usize,
    pub failed: usize,
    pub ok: bool,
}

fn check(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> CheckResult {
    CheckResult {
        name: name.into(),
        pass,
        detail: detail.into(),
    }
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

// ---------------------------------------------------------------------------
// Shared sampling helpers
// ---------------------------------------------------------------------------

fn random_path(g: &FareyGraph, rng: &mut ChaCha8Rng, m: usize) -> Path {
    let mut idx = rng.random_range(0..g.vertex_count());
    let mut vertices = vec![*g.vertex(idx)];
    for _ in 0..m {
        let outs = g.out_neighbors(idx);
        idx = outs[rng.random_range(0..outs.len())];
        vertices.push(*g.vertex(idx));
    }
    Path::new(vertices).expect("walk along edges is a path")
}

fn fiber(target: &FareyGraph, v: &Vertex) -> Vec<Vertex> {
    target
        .vertices()
        .iter()
        .copied()
        .filter(|w| w.reduce(v.modulus()).unwrap() == *v)
        .collect()
}

/// Paths from 1/0 through 0/1 to a unit multiple of 1/0, of length `m`.
fn x_family(g: &FareyGraph, m: u32) -> Vec<Path> {
    let n = g.n();
    let origin = Vertex::new(1, 0, n).unwrap();
    let second = Vertex::new(0, 1, n).unwrap();
    let mut out = Vec::new();
    for lambda in 1..n {
        let Ok(end) = Vertex::new(lambda, 0, n) else {
            continue;
        };
        for path in enumerate_paths(g, &origin, &end, m, 1_000_000).unwrap() {
            if path.vertices()[1] == second {
                out.push(path);
            }
        }
    }
    out
}

fn semiclosed_paths(g: &FareyGraph, m: u32) -> Vec<Path> {
    let origin = Vertex::new(1, 0, g.n()).unwrap();
    enumerate_paths(g, &origin, &origin.negate(), m, 1_000_000).unwrap()
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

fn suite_crt(_params: &SuiteParams, _seed: u64) -> Vec<CheckResult> {
    let mut checks = Vec::new();
    for (m, n) in [(2u64, 3u64), (2, 5), (3, 4), (3, 5), (4, 5)] {
        let g = FareyGraph::build(m * n).unwrap();
        let gm = FareyGraph::build(m).unwrap();
        let gn = FareyGraph::build(n).unwrap();

        let mut ok = g.vertex_count() == gm.vertex_count() * gn.vertex_count();
        let mut images = HashSet::new();
        for v in g.vertices() {
            match crt_iso_alpha(v, m, n) {
                Ok(pair) => {
                    ok &= images.insert(pair);
                    ok &= crt_iso_beta(&pair.0, &pair.1)
                        .map(|w| w == *v)
                        .unwrap_or(false);
                }
                Err(_) => ok = false,
            }
        }
        checks.push(check(
            format!("vertex-bijection-{m}x{n}"),
            ok,
            format!(
                "{} vertices split componentwise, injectively, with verified inverse",
                g.vertex_count()
            ),
        ));

        let tensor = tensor_product(&gm, &gn);
        let mut ok =
            tensor.edge_count() == g.edge_count() && g.edge_count() == sl2_order(m * n) as usize;
        for (ui, u) in g.vertices().iter().enumerate() {
            let au = crt_iso_alpha(u, m, n).unwrap();
            for &wi in g.out_neighbors(ui) {
                let aw = crt_iso_alpha(g.vertex(wi), m, n).unwrap();
                ok &= tensor.has_edge(&au, &aw);
            }
        }
        checks.push(check(
            format!("edge-bijection-{m}x{n}"),
            ok,
            format!(
                "{} edges preserved into the tensor product; cardinalities match the group order",
                g.edge_count()
            ),
        ));
    }
    checks
}

fn suite_lifting(params: &SuiteParams, seed: u64) -> Vec<CheckResult> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = params.samples;

    // Anchored lifts of sampled paths have fibers of size p^((r-s)m).
    for (p, s, r) in [
        (2u64, 1u32, 2u32),
        (2, 1, 3),
        (2, 2, 3),
        (3, 1, 2),
        (3, 1, 3),
    ] {
        let source = FareyGraph::build(p.pow(s)).unwrap();
        let target = FareyGraph::build(p.pow(r)).unwrap();
        let mut ok = true;
        let mut verified = 0u32;
        for i in 0..samples {
            let m = 2 + (i % 3) as usize;
            let expected = p.pow((r - s) * m as u32) as usize;
            let path = random_path(&source, &mut rng, m);

            let first_fiber = fiber(&target, path.first());
            let anchor = first_fiber[rng.random_range(0..first_fiber.len())];
            match lift_paths(&path, r, LiftAnchor::Initial(anchor)) {
                Ok(lifts) => {
                    ok &= lifts.len() == expected;
                    ok &= lifts
                        .iter()
                        .all(|l| l.reduce(p.pow(s)).map(|b| b == path).unwrap_or(false));
                }
                Err(_) => ok = false,
            }

            let last_fiber = fiber(&target, path.last());
            let anchor = last_fiber[rng.random_range(0..last_fiber.len())];
            match lift_paths(&path, r, LiftAnchor::Final(anchor)) {
                Ok(lifts) => ok &= lifts.len() == expected,
                Err(_) => ok = false,
            }
            verified += 1;
        }
        checks.push(check(
            format!("anchored-fibers-p{p}-s{s}-r{r}"),
            ok,
            format!("{verified} sampled paths of lengths 2..=4, initial and final anchors"),
        ));
    }

    // Lifts landing back inside the X family are counted by p^((r-1)(m-2)).
    for p in [2u64, 3] {
        let source = FareyGraph::build(p).unwrap();
        for r in 2..=params.r_max.min(3) {
            let q = p.pow(r);
            let anchor = Vertex::new(1, 0, q).unwrap();
            let second = Vertex::new(0, 1, q).unwrap();
            let mut ok = true;
            let mut verified = 0u32;
            for m in 3..=4u32 {
                let expected = p.pow((r - 1) * (m - 2)) as usize;
                for path in x_family(&source, m) {
                    let lifts = lift_paths(&path, r, LiftAnchor::Initial(anchor)).unwrap();
                    let hits = lifts
                        .iter()
                        .filter(|l| {
                            l.vertices()[1] == second && l.last().b() == 0 && l.last().a() % p != 0
                        })
                        .count();
                    ok &= hits == expected;
                    verified += 1;
                }
            }
            checks.push(check(
                format!("x-lifts-p{p}-r{r}"),
                ok,
                format!("{verified} base paths, lengths 3..=4, exhaustive lift filtering"),
            ));
        }
    }

    // Lifts landing back inside the semiclosed family are counted by
    // p^((r-s)(m-2)) for paths carrying a liftable window.
    for p in [2u64, 3] {
        let source = FareyGraph::build(p).unwrap();
        let q = p * p;
        let anchor = Vertex::new(1, 0, q).unwrap();
        let target_end = anchor.negate();
        let mut ok = true;
        let mut verified = 0u32;
        for m in 3..=5u32 {
            let expected = p.pow(m - 2) as usize;
            for path in semiclosed_paths(&source, m) {
                if !has_liftable_subpath(&path, p) {
                    continue;
                }
                let lifts = lift_paths(&path, 2, LiftAnchor::Initial(anchor)).unwrap();
                let hits = lifts.iter().filter(|l| *l.last() == target_end).count();
                ok &= hits == expected;
                verified += 1;
            }
        }
        checks.push(check(
            format!("y-lifts-p{p}"),
            ok,
            format!("{verified} windowed semiclosed paths, lengths 3..=5, one exponent step"),
        ));
    }

    checks
}

fn suite_lemma4(_params: &SuiteParams, _seed: u64) -> Vec<CheckResult> {
    let mut checks = Vec::new();
    for (q, p) in [(4u64, 2u64), (8, 2), (9, 3)] {
        let g = FareyGraph::build(q).unwrap();
        let mut ok = true;
        let mut unit_pairs = 0u32;
        for u in g.vertices() {
            let ui = g.vertex_index(u).unwrap();
            for w in g.vertices() {
                let wi = g.vertex_index(w).unwrap();
                let found: Vec<Vertex> = (0..g.vertex_count())
                    .filter(|&vi| g.has_edge(ui, vi) && g.has_edge(vi, wi))
                    .map(|vi| *g.vertex(vi))
                    .collect();
                let det = (u.a() as u128 * w.b() as u128 + (q as u128) * (q as u128)
                    - u.b() as u128 * w.a() as u128)
                    % q as u128;
                if !(det as u64).is_multiple_of(p) {
                    unit_pairs += 1;
                    match middle_vertex(u, w) {
                        Ok(v) => ok &= found == vec![v],
                        Err(_) => ok = false,
                    }
                } else {
                    ok &= matches!(
                        middle_vertex(u, w),
                        Err(PathCountError::PreconditionViolated(_))
                    );
                }
            }
        }
        checks.push(check(
            format!("unique-middle-mod-{q}"),
            ok,
            format!("{unit_pairs} unit-determinant pairs have exactly the computed middle vertex"),
        ));
    }

    // The textbook sufficient hypothesis (denominator and numerator units,
    // p dividing the opposite entries) always lands in the unit-determinant
    // case.
    for (q, p) in [(4u64, 2u64), (9, 3)] {
        let g = FareyGraph::build(q).unwrap();
        let mut ok = true;
        let mut covered = 0u32;
        for u in g.vertices() {
            for w in g.vertices() {
                let units = u.b() % p != 0 && w.a() % p != 0;
                let divides = u.a() % p == 0 || w.b() % p == 0;
                if units && divides {
                    covered += 1;
                    let det = (u.a() as u128 * w.b() as u128 + (q as u128) * (q as u128)
                        - u.b() as u128 * w.a() as u128)
                        % q as u128;
                    ok &= !(det as u64).is_multiple_of(p);
                    ok &= middle_vertex(u, w).is_ok();
                }
            }
        }
        checks.push(check(
            format!("sufficient-hypothesis-mod-{q}"),
            ok,
            format!("{covered} hypothesis pairs all fall in the unit-determinant case"),
        ));
    }
    checks
}

fn suite_lemma7(_params: &SuiteParams, _seed: u64) -> Vec<CheckResult> {
    let mut checks = Vec::new();
    for (q, p) in [(4u64, 2u64), (8, 2), (9, 3)] {
        let g = FareyGraph::build(q).unwrap();
        let mut ok = true;
        let mut sources = 0u32;
        for eps in [1, q - 1] {
            let target = Vertex::new(eps, 0, q).unwrap();
            for u in g.vertices() {
                if u.b() == 0 {
                    continue;
                }
                let a = (u.a() + eps) % q;
                let t = match valuation(u.b(), p) {
                    Valuation::Finite(t) => t,
                    Valuation::Infinite => unreachable!("b is nonzero"),
                };
                let expected = if valuation(a, p) >= Valuation::Finite(t) {
                    p.pow(t)
                } else {
                    0
                };
                let got = count_paths(&g, u, &target, 2).unwrap();
                ok &= got == big(expected);
                sources += 1;
            }
        }
        checks.push(check(
            format!("two-step-valuation-mod-{q}"),
            ok,
            format!("{sources} source vertices, both boundary targets, exhaustive"),
        ));
    }
    checks
}

fn suite_recurrence(params: &SuiteParams, _seed: u64) -> Vec<CheckResult> {
    let mut checks = Vec::new();
    let r_max = params.r_max;
    let k_max = params.k_max;

    for &p in &params.primes {
        // Length-one base case and the pure-power base at exponent one.
        let mut ok = true;
        for r in 1..=r_max {
            ok &= count_z(p, r, 1).unwrap() == big(p.pow(r));
        }
        for k in 1..=k_max {
            ok &= count_z(p, 1, k).unwrap() == big(p.pow(k));
        }
        checks.push(check(
            format!("base-cases-p{p}"),
            ok,
            format!("half-length 1 gives p^r; exponent 1 gives p^k, r <= {r_max}, k <= {k_max}"),
        ));

        // Two-step recurrence over the half-length.
        let mut ok = true;
        let mut cells = 0u32;
        for r in 1..=r_max {
            for k in 2..=k_max {
                let mut rhs = big(p.pow(r)) * count_z(p, r, k - 1).unwrap();
                for t in 1..r {
                    rhs += big(p.pow(t)) * count_z_t(p, r, k - 1, t).unwrap();
                }
                ok &= count_z(p, r, k).unwrap() == rhs;
                cells += 1;
            }
        }
        checks.push(check(
            format!("two-step-recurrence-p{p}"),
            ok,
            format!("{cells} (r, k) cells agree with the valuation-split recurrence"),
        ));

        // Valuation classes scale down the exponent.
        let mut ok = true;
        let mut cells = 0u32;
        for k in 1..=k_max {
            if r_max >= 3 {
                ok &= count_z_t(p, 3, k, 1).unwrap()
                    == big(p.pow(2 * k)) * count_z_t(p, 2, k, 1).unwrap();
                cells += 1;
            }
            for r in 2..=r_max {
                ok &= count_z_t(p, r, k, r - 1).unwrap()
                    == big(p.pow(2 * k - 1)) * big(p - 1) * count_z(p, r - 1, k).unwrap();
                cells += 1;
            }
        }
        checks.push(check(
            format!("valuation-class-scaling-p{p}"),
            ok,
            format!("{cells} scaling identities between consecutive exponents"),
        ));

        // Closed form against masked transfer-matrix counts, one extra
        // half-length beyond the recurrence grid.
        let mut ok = true;
        let mut cells = 0u32;
        for r in 1..=r_max {
            for k in 1..=k_max + 1 {
                ok &= z_closed_form(p, r, k) == count_z(p, r, k).unwrap();
                cells += 1;
            }
        }
        checks.push(check(
            format!("closed-form-p{p}"),
            ok,
            format!("{cells} (r, k) cells, closed form equals masked transfer count"),
        ));
    }

    // Wrap-around family over p = 2: closed form and emptiness at r = 1.
    let mut ok = true;
    let mut cells = 0u32;
    for r in 2..=r_max.min(3) {
        for k in [2u32, 4] {
            let expected = big(2u64.pow((r - 2) * (2 * k - 2)))
                * big(2u64.pow(2 * k - 1))
                * big(2u64.pow(k - 1) - 1);
            ok &= count_w(r, k).unwrap() == expected;
            cells += 1;
        }
    }
    ok &= count_w(1, 2).unwrap().is_zero() && count_w(1, 4).unwrap().is_zero();
    checks.push(check(
        "wraparound-closed-form",
        ok,
        format!("{cells} (r, k) cells plus emptiness at exponent 1"),
    ));

    // The four-vertex condensed graph reproduces the wrap-around counts.
    let ok = aux_graph_counts(1) == big(4)
        && aux_graph_counts(2) == big(8)
        && aux_graph_counts(4) == big(896)
        && [2u32, 4, 6]
            .iter()
            .all(|&k| aux_graph_counts(k) == count_w(2, k).unwrap());
    checks.push(check(
        "condensed-graph-walks",
        ok,
        "matrix powers on 4 classes match masked counts for k in {2, 4, 6}",
    ));

    checks
}

fn suite_omega_partition(params: &SuiteParams, _seed: u64) -> Vec<CheckResult> {
    let mut checks = Vec::new();

    for (p, m, total) in [(2u64, 6u32, 22usize), (3, 6, 105), (2, 4, 6)] {
        let g = FareyGraph::build(p).unwrap();
        let paths = semiclosed_paths(&g, m);
        let mut ok = paths.len() == total;
        let mut zigzags = 0u64;
        for path in &paths {
            let omega = is_omega_path(path);
            let liftable = has_liftable_subpath(path, p);
            ok &= omega ^ liftable;
            if omega {
                zigzags += 1;
            }
        }
        ok &= zigzags == p.pow(m / 2);
        checks.push(check(
            format!("partition-p{p}-m{m}"),
            ok,
            format!(
                "{} boundary paths split into {} zig-zags and {} windowed paths",
                paths.len(),
                zigzags,
                paths.len() as u64 - zigzags
            ),
        ));
    }

    let mut ok = true;
    let mut families = 0u32;
    for &p in &params.primes {
        for k in 1..=params.k_max.min(3) {
            let family = enumerate_omega(p, k);
            ok &= family.len() as u64 == p.pow(k);
            ok &= family
                .iter()
                .all(|path| is_omega_path(path) && !has_liftable_subpath(path, p));
            families += 1;
        }
    }
    checks.push(check(
        "zigzag-family-sizes",
        ok,
        format!("{families} families of size p^k, none carrying a liftable window"),
    ));

    // Boundary paths that cannot be zig-zags always carry a window: odd
    // lengths, and length 4 over p = 3 where the zig-zag family ends at
    // +1/0 rather than -1/0.
    let mut ok = true;
    let mut verified = 0u32;
    for (p, m) in [(2u64, 3u32), (3, 3), (2, 5), (3, 5), (3, 4)] {
        let g = FareyGraph::build(p).unwrap();
        let paths = semiclosed_paths(&g, m);
        ok &= !paths.is_empty();
        for path in &paths {
            ok &= !is_omega_path(path) && has_liftable_subpath(path, p);
            verified += 1;
        }
    }
    checks.push(check(
        "windows-outside-zigzag",
        ok,
        format!("{verified} boundary paths, all carrying a liftable window"),
    ));

    checks
}

fn suite_theorem_a(params: &SuiteParams, _seed: u64) -> Vec<CheckResult> {
    let mut checks = Vec::new();

    let mut ok = true;
    let mut cells = 0u32;
    for n in 2..=u64::from(params.n_max) {
        let g = FareyGraph::build(n).unwrap();
        for m in 2..=params.m_max {
            let formula = tame_count_formula(n, m);
            let enumerated = big(totient(n)) * count_x(&g, m).unwrap();
            ok &= formula == enumerated;
            cells += 1;
        }
    }
    checks.push(check(
        "grid-equality",
        ok,
        format!(
            "{cells} cells (n <= {}, m <= {}): formula equals totient-weighted path count",
            params.n_max, params.m_max
        ),
    ));

    // Frozen spot values, including the unique shortest witness path.
    let g2 = FareyGraph::build(2).unwrap();
    let unique = x_family(&g2, 3);
    let witness = Path::new(vec![
        Vertex::new(1, 0, 2).unwrap(),
        Vertex::new(0, 1, 2).unwrap(),
        Vertex::new(1, 1, 2).unwrap(),
        Vertex::new(1, 0, 2).unwrap(),
    ])
    .unwrap();
    let ok = tame_count_formula(5, 6) == big(2084)
        && tame_count_formula(2, 3) == big(1)
        && unique == vec![witness]
        && tame_count_formula(4, 3) == big(4);
    checks.push(check(
        "spot-values",
        ok,
        "2084 at n=5 m=6; the single n=2 m=3 witness path; 4 at n=4 m=3",
    ));

    let mut ok = true;
    let mut cells = 0u32;
    for p in [2u64, 3, 5, 7, 11] {
        for m in 2..=9u32 {
            ok &= tame_count_field(p, m) == tame_count_formula(p, m);
            cells += 1;
        }
    }
    ok &= tame_count_field(3, 4) == big(14);
    checks.push(check(
        "field-case-agreement",
        ok,
        format!("{cells} prime cells agree; 14 at p=3 m=4 pinned by dual oracle"),
    ));

    checks.push(cache_round_trip(FriezeKind::Tame, "tame", 5, 6));
    checks
}

fn suite_theorem_b(params: &SuiteParams, _seed: u64) -> Vec<CheckResult> {
    let mut checks = Vec::new();

    let mut ok = true;
    let mut cells = 0u32;
    for n in 2..=u64::from(params.n_max) {
        let g = FareyGraph::build(n).unwrap();
        for m in 2..=params.m_max {
            let total = count_y(&g, m).unwrap();
            let nn = big(n);
            ok &= (&total % &nn).is_zero();
            ok &= regular_count_formula(n, m) * nn == total;
            cells += 1;
        }
    }
    checks.push(check(
        "grid-equality",
        ok,
        format!(
            "{cells} cells (n <= {}, m <= {}): n times the formula equals the semiclosed count",
            params.n_max, params.m_max
        ),
    ));

    let g2 = FareyGraph::build(2).unwrap();
    let ok = regular_count_formula(2, 4) == big(3)
        && count_y(&g2, 4).unwrap() == big(6)
        && regular_count_formula(12, 5) == big(200)
        && regular_count_formula(3, 4) == big(2);
    checks.push(check(
        "spot-values",
        ok,
        "3 at n=2 m=4 with 6 semiclosed paths; 200 at n=12 m=5; 2 at n=3 m=4",
    ));

    let ok = phi_m(2, 3, 6) == big(800)
        && phi_m(2, 2, 4) == big(4)
        && phi_m(2, 2, 5) == big(20)
        && phi_m(3, 1, 5) == big(10);
    checks.push(check(
        "rational-bracket-values",
        ok,
        "even-width local factors exercise the rational bracket path; 800 at p=2 r=3 m=6",
    ));

    let mut ok = true;
    let mut cells = 0u32;
    for p in [2u64, 3, 5, 7] {
        for m in 2..=9u32 {
            ok &= phi_field(p, m) == phi_m(p, 1, m);
            cells += 1;
        }
    }
    checks.push(check(
        "field-consistency",
        ok,
        format!("{cells} cells: the field-case count equals the exponent-one local factor"),
    ));

    checks.push(cache_round_trip(FriezeKind::Regular, "regular", 12, 5));
    checks
}

fn suite_frieze_render(params: &SuiteParams, seed: u64) -> Vec<CheckResult> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // The golden window: clean on all three local rules, faithful to the
    // printed array (whose second-last row is 2 3 2 3, hence not regular),
    // and stable under the text round trip.
    let w = reference_window_z5();
    let round = FriezeWindow::from_text(&w.to_text());
    let ok = w.n() == 5
        && w.width() == 6
        && w.period() == 4
        && w.check_boundary().is_empty()
        && w.check_diamond().is_empty()
        && w.check_tame().is_empty()
        && !w.is_regular()
        && round.as_ref() == Ok(&w);
    checks.push(check(
        "reference-window",
        ok,
        "zero boundary/diamond/tame violations; second-last row 2 3 2 3 (not regular); \
         text round trip is exact",
    ));

    let mut ok = true;
    let mut rendered = 0u32;
    for n in 2..=8u64 {
        let g = FareyGraph::build(n).unwrap();
        for m in 2..=6u32 {
            let paths = semiclosed_paths(&g, m);
            ok &= !paths.is_empty();
            if paths.is_empty() {
                continue;
            }
            for _ in 0..params.samples {
                let path = &paths[rng.random_range(0..paths.len())];
                let w = render_from_path(path, 1).unwrap();
                ok &= w.check_boundary().is_empty()
                    && w.check_diamond().is_empty()
                    && w.check_tame().is_empty()
                    && w.is_regular()
                    && w.period() == 2 * m
                    && FriezeWindow::from_text(&w.to_text()).as_ref() == Ok(&w);
                rendered += 1;
            }
        }
    }
    checks.push(check(
        "sampled-renders",
        ok,
        format!("{rendered} rendered windows (n <= 8, m <= 6) pass every check and round-trip"),
    ));

    let g4 = FareyGraph::build(4).unwrap();
    let mut ok = true;
    let mut compared = 0u32;
    for path in semiclosed_paths(&g4, 4).iter().take(12) {
        let w4 = render_from_path(path, 1).unwrap();
        let w2 = render_from_path(&path.reduce(2).unwrap(), 1).unwrap();
        for d in 0..=w4.width() {
            for i in 0..w4.period() {
                ok &= w4.entry(d, i64::from(i)) % 2 == w2.entry(d, i64::from(i));
            }
        }
        compared += 1;
    }
    checks.push(check(
        "reduction-compatibility",
        ok,
        format!("{compared} windows over 4 reduce entrywise to their windows over 2"),
    ));

    let g5 = FareyGraph::build(5).unwrap();
    let origin = Vertex::new(1, 0, 5).unwrap();
    let open = enumerate_paths(&g5, &origin, &Vertex::new(0, 1, 5).unwrap(), 3, 100)
        .unwrap()
        .into_iter()
        .next()
        .unwrap();
    let ok = matches!(
        render_from_path(&open, 1),
        Err(FriezeError::NotSemiclosed { .. })
    );
    checks.push(check(
        "rejects-open-paths",
        ok,
        "a path that does not end at the negated origin is refused",
    ));

    checks
}

/// Round-trips one formula count through the on-disk cache and compares the
/// cached string to recomputation.
fn cache_round_trip(kind: FriezeKind, kind_name: &str, n: u64, m: u32) -> CheckResult {
    let computed = formula_count(kind, n, m).to_string();
    let key = CountCache::key(kind_name, n, m, "formula");
    let pass = (|| -> Result<bool, std::io::Error> {
        let dir = tempfile::tempdir()?;
        {
            let mut cache = CountCache::open(dir.path())?;
            cache.store(&key, &computed)?;
        }
        let cache = CountCache::open(dir.path())?;
        Ok(cache.lookup(&key) == Some(computed.as_str()))
    })()
    .unwrap_or(false);
    check(
        "cache-round-trip",
        pass,
        format!("cached {kind_name} count for n={n}, m={m} is bit-identical to recomputation"),
    )
}

// ---------------------------------------------------------------------------
// Dispatch and reporting
// ---------------------------------------------------------------------------

fn suite_name(suite: SuiteArg) -> &'static str {
    match suite {
        SuiteArg::Crt => "crt",
        SuiteArg::Lifting => "lifting",
        SuiteArg::Lemma4 => "lemma4",
        SuiteArg::Lemma7 => "lemma7",
        SuiteArg::Recurrence => "recurrence",
        SuiteArg::OmegaPartition => "omega-partition",
        SuiteArg::TheoremA => "theorem-a",
        SuiteArg::TheoremB => "theorem-b",
        SuiteArg::FriezeRender => "frieze-render",
        SuiteArg::All => "all",
    }
}

fn run_suite(suite: SuiteArg, params: &SuiteParams, seed: u64) -> SuiteReport {
    let checks = match suite {
        SuiteArg::Crt => suite_crt(params, seed),
        SuiteArg::Lifting => suite_lifting(params, seed),
        SuiteArg::Lemma4 => suite_lemma4(params, seed),
        SuiteArg::Lemma7 => suite_lemma7(params, seed),
        SuiteArg::Recurrence => suite_recurrence(params, seed),
        SuiteArg::OmegaPartition => suite_omega_partition(params, seed),
        SuiteArg::TheoremA => suite_theorem_a(params, seed),
        SuiteArg::TheoremB => suite_theorem_b(params, seed),
        SuiteArg::FriezeRender => suite_frieze_render(params, seed),
        SuiteArg::All => unreachable!("the umbrella suite is expanded by the caller"),
    };
    let passed = checks.iter().filter(|c| c.pass).count();
    let failed = checks.len() - passed;
    SuiteReport {
        suite: suite_name(suite).to_string(),
        seed,
        params: params.clone(),
        checks,
        passed,
        failed,
        ok: failed == 0,
    }
}

fn print_suite_summary(report: &SuiteReport) {
    eprintln!("== suite {} (seed {})", report.suite, report.seed);
    for c in &report.checks {
        let tag = if c.pass { "ok  " } else { "FAIL" };
        eprintln!("{tag} {}: {}", c.name, c.detail);
    }
    eprintln!(
        "suite {}: {} passed, {} failed",
        report.suite, report.passed, report.failed
    );
}

const ALL_SUITES: [SuiteArg; 9] = [
    SuiteArg::Crt,
    SuiteArg::Lifting,
    SuiteArg::Lemma4,
    SuiteArg::Lemma7,
    SuiteArg::Recurrence,
    SuiteArg::OmegaPartition,
    SuiteArg::TheoremA,
    SuiteArg::TheoremB,
    SuiteArg::FriezeRender,
];

#[allow(clippy::too_many_arguments)]
pub fn cmd_verify(
    suite: SuiteArg,
    seed: u64,
    n_max: Option<u32>,
    m_max: Option<u32>,
    r_max: Option<u32>,
    k_max: Option<u32>,
    samples: Option<u32>,
    unsafe_large: bool,
) -> u8 {
    let params = SuiteParams {
        n_max: n_max.unwrap_or(12),
        m_max: m_max.unwrap_or(7),
        primes: vec![2, 3],
        r_max: r_max.unwrap_or(3),
        k_max: k_max.unwrap_or(3),
        samples: samples.unwrap_or(50),
    };
    if params.n_max < 2 || params.m_max < 2 || params.r_max < 1 || params.k_max < 1 {
        return usage_error("verify requires n-max >= 2, m-max >= 2, r-max >= 1, k-max >= 1");
    }
    if !unsafe_large
        && (params.n_max > bounds::VERIFY_N
            || params.m_max > bounds::VERIFY_M
            || params.r_max > bounds::VERIFY_R
            || params.k_max > bounds::VERIFY_K
            || params.samples > bounds::VERIFY_SAMPLES)
    {
        return usage_error(&format!(
            "verify is bounded to n-max <= {}, m-max <= {}, r-max <= {}, k-max <= {}, \
             samples <= {} by default; pass --unsafe-large to override",
            bounds::VERIFY_N,
            bounds::VERIFY_M,
            bounds::VERIFY_R,
            bounds::VERIFY_K,
            bounds::VERIFY_SAMPLES
        ));
    }

    if suite == SuiteArg::All {
        let suites: Vec<SuiteReport> = ALL_SUITES
            .iter()
            .map(|&s| run_suite(s, &params, seed))
            .collect();
        for report in &suites {
            print_suite_summary(report);
        }
        let passed = suites.iter().map(|s| s.passed).sum();
        let failed = suites.iter().map(|s| s.failed).sum::<usize>();
        let ok = failed == 0;
        let all = AllReport {
            suite: "all".to_string(),
            seed,
            suites,
            passed,
            failed,
            ok,
        };
        eprintln!("all: {} passed, {} failed", all.passed, all.failed);
        println!("{}", serde_json::to_string_pretty(&all).unwrap());
        if ok {
            0
        } else {
            1
        }
    } else {
        let report = run_suite(suite, &params, seed);
        print_suite_summary(&report);
        let code = if report.ok { 0 } else { 1 };
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
        code
    }
}
