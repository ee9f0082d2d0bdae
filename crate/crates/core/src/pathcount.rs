//! Path families in Farey graphs and the machinery to count them exactly:
//! transfer-matrix products over big naturals, DFS enumeration oracles,
//! lifting of paths between prime-power moduli, and the masked counting
//! engine used for the alternating (Omega-shaped) families.
//!
//! Family overview (all inside E_n, or E_{p^r} where noted):
//! - X_m: paths v_0 = 1/0, v_1 = 0/1, ..., v_m equivalent to v_0; these
//!   index tame friezes of width m (up to the unit acting on v_m).
//! - Y_m: semiclosed paths 1/0 -> ... -> -1/0 of length m; regular friezes
//!   of width m correspond to |Y_m(n)|/n.
//! - Omega_2k(p): alternating paths 1/0 -> λ_1/1 -> -1/0 -> λ_2/-1 -> ...
//!   of length 2k in E_p, ending at ε/0 with ε = (-1)^k.
//! - Z_k(r), Z_k(r,t): lifts of Omega_2k(p) paths to E_{p^r} starting at
//!   1/0, classified by the exact shape of the final vertex.
//! - W_k(r): lifts of Omega_2k(2) paths (k even) from 1/0 to -1/0.

use crate::fareygraph::{is_edge, pair_det, FareyGraph, GraphError, Vertex};
use crate::modring::{self, Valuation};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;
use std::fmt;
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PathCountError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("not a path: {0}")]
    NotAPath(String),
    #[error("vertex {0} is not in E_{1}")]
    VertexNotInGraph(String, u64),
    #[error("enumeration limit {limit} exceeded; at least {found} paths exist")]
    LimitExceeded { limit: usize, found: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("anchor {anchor} does not reduce to the path endpoint {endpoint}")]
    BadAnchor { anchor: String, endpoint: String },
    #[error("middle-vertex precondition violated: {0}")]
    PreconditionViolated(String),
}

/// A directed path: at least one edge, every consecutive pair an edge.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Path {
    vertices: Vec<Vertex>,
}

impl Path {
    pub fn new(vertices: Vec<Vertex>) -> Result<Self, PathCountError> {
        if vertices.len() < 2 {
            return Err(PathCountError::NotAPath(format!(
                "need at least two vertices, got {}",
                vertices.len()
            )));
        }
        for (i, pair) in vertices.windows(2).enumerate() {
            if !is_edge(&pair[0], &pair[1])? {
                return Err(PathCountError::NotAPath(format!(
                    "{} -> {} (positions {i}..{}) is not an edge",
                    pair[0],
                    pair[1],
                    i + 1
                )));
            }
        }
        Ok(Path { vertices })
    }

    pub fn modulus(&self) -> u64 {
        self.vertices[0].modulus()
    }

    /// Number of edges.
    pub fn length(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn first(&self) -> &Vertex {
        &self.vertices[0]
    }

    pub fn last(&self) -> &Vertex {
        self.vertices.last().expect("paths are nonempty")
    }

    /// Componentwise reduction to a divisor modulus; a path again, since
    /// reduction is a graph homomorphism.
    pub fn reduce(&self, m: u64) -> Result<Path, GraphError> {
        let vertices = self
            .vertices
            .iter()
            .map(|v| v.reduce(m))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Path { vertices })
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.vertices {
            if !first {
                write!(f, " -> ")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

/// Number of directed walks u -> v of length m, by iterated
/// matrix-vector products with big-natural entries.
pub fn count_paths(
    g: &FareyGraph,
    u: &Vertex,
    v: &Vertex,
    m: u32,
) -> Result<BigUint, PathCountError> {
    let ui = index_of(g, u)?;
    let vi = index_of(g, v)?;
    let mut counts = vec![BigUint::zero(); g.vertex_count()];
    counts[ui] = BigUint::one();
    for _ in 0..m {
        counts = advance(g, &counts, None);
    }
    Ok(counts[vi].clone())
}

fn index_of(g: &FareyGraph, v: &Vertex) -> Result<usize, PathCountError> {
    g.vertex_index(v)
        .ok_or_else(|| PathCountError::VertexNotInGraph(v.to_string(), g.n()))
}

/// One transfer-matrix step: next[j] = sum of cur over in-neighbors of j,
/// restricted to `allowed` target indices when given.
fn advance(g: &FareyGraph, cur: &[BigUint], allowed: Option<&[usize]>) -> Vec<BigUint> {
    let mut next = vec![BigUint::zero(); cur.len()];
    let mut fill = |j: usize| {
        let mut acc = BigUint::zero();
        for &i in g.in_neighbors(j) {
            acc += &cur[i];
        }
        next[j] = acc;
    };
    match allowed {
        Some(list) => list.iter().for_each(|&j| fill(j)),
        None => (0..cur.len()).for_each(fill),
    }
    next
}

/// All walks u -> v of length m, in the lexicographic order induced by the
/// graph's vertex order. Errors out once more than `limit` walks are found.
pub fn enumerate_paths(
    g: &FareyGraph,
    u: &Vertex,
    v: &Vertex,
    m: u32,
    limit: usize,
) -> Result<Vec<Path>, PathCountError> {
    assert!(m >= 1, "enumeration needs at least one edge");
    let ui = index_of(g, u)?;
    let vi = index_of(g, v)?;
    let mut chain = vec![ui];
    let mut out = Vec::new();
    dfs_endpoint(g, &mut chain, vi, m as usize, limit, &mut out)?;
    Ok(out)
}

fn dfs_endpoint(
    g: &FareyGraph,
    chain: &mut Vec<usize>,
    target: usize,
    m: usize,
    limit: usize,
    out: &mut Vec<Path>,
) -> Result<(), PathCountError> {
    if chain.len() == m + 1 {
        if *chain.last().unwrap() == target {
            if out.len() == limit {
                return Err(PathCountError::LimitExceeded {
                    limit,
                    found: limit + 1,
                });
            }
            out.push(path_from_indices(g, chain));
        }
        return Ok(());
    }
    let current = *chain.last().unwrap();
    for &j in g.out_neighbors(current) {
        chain.push(j);
        dfs_endpoint(g, chain, target, m, limit, out)?;
        chain.pop();
    }
    Ok(())
}

fn path_from_indices(g: &FareyGraph, chain: &[usize]) -> Path {
    let vertices = chain.iter().map(|&i| *g.vertex(i)).collect();
    Path::new(vertices).expect("DFS follows adjacency, so the chain is a path")
}

/// |X_m(n)|: paths with v_0 = 1/0, v_1 = 0/1, and v_m equivalent to v_0,
/// i.e. v_m = λ/0 for a unit λ. Computed as one vector sweep of length
/// m−1 from 0/1, summed over the unit final vertices.
pub fn count_x(g: &FareyGraph, m: u32) -> Result<BigUint, PathCountError> {
    if m < 2 {
        return Err(PathCountError::InvalidParams(format!(
            "the X family needs m >= 2 (v_1 = 0/1 is pinned), got m={m}"
        )));
    }
    let n = g.n();
    let start = Vertex::new(0, 1, n).expect("0/1 is always a vertex");
    let mut counts = vec![BigUint::zero(); g.vertex_count()];
    counts[index_of(g, &start)?] = BigUint::one();
    for _ in 0..m - 1 {
        counts = advance(g, &counts, None);
    }
    let mut total = BigUint::zero();
    for lambda in modring::units(n) {
        let end = Vertex::new(lambda.value(), 0, n).expect("unit/0 is a vertex");
        total += &counts[index_of(g, &end)?];
    }
    Ok(total)
}

/// |Y_m(n)|: semiclosed paths 1/0 -> ... -> -1/0 of length m.
pub fn count_y(g: &FareyGraph, m: u32) -> Result<BigUint, PathCountError> {
    if m < 1 {
        return Err(PathCountError::InvalidParams(
            "the Y family needs m >= 1".to_string(),
        ));
    }
    let n = g.n();
    let start = Vertex::new(1, 0, n).expect("1/0 is always a vertex");
    count_paths(g, &start, &start.negate(), m)
}

/// Which endpoint of a lifted path is pinned, and to what vertex of the
/// target graph.
#[derive(Clone, Copy, Debug)]
pub enum LiftAnchor {
    Initial(Vertex),
    Final(Vertex),
}

/// All lifts of a path from E_{p^s} to E_{p^r} with the anchored endpoint
/// fixed. There are exactly p^{(r−s)·length} of them: each successive
/// vertex fiber contributes p^{r−s} compatible choices.
pub fn lift_paths(path: &Path, r: u32, anchor: LiftAnchor) -> Result<Vec<Path>, PathCountError> {
    let pp = modring::factorize(path.modulus())
        .as_prime_power()
        .ok_or_else(|| {
            PathCountError::InvalidParams(format!(
                "lifting needs a prime-power modulus, got {}",
                path.modulus()
            ))
        })?;
    let (p, s) = (pp.prime, pp.exponent);
    if r < s {
        return Err(PathCountError::InvalidParams(format!(
            "target exponent {r} is below the source exponent {s}"
        )));
    }
    let target_modulus = p.pow(r);
    let (anchor_vertex, endpoint) = match anchor {
        LiftAnchor::Initial(v) => (v, path.first()),
        LiftAnchor::Final(v) => (v, path.last()),
    };
    let reduced = if r == s {
        anchor_vertex
    } else {
        if anchor_vertex.modulus() != target_modulus {
            return Err(PathCountError::InvalidParams(format!(
                "anchor lives mod {}, expected mod {target_modulus}",
                anchor_vertex.modulus()
            )));
        }
        anchor_vertex.reduce(path.modulus())?
    };
    if reduced != *endpoint {
        return Err(PathCountError::BadAnchor {
            anchor: anchor_vertex.to_string(),
            endpoint: endpoint.to_string(),
        });
    }

    // DFS over vertex fibers, from the anchored end toward the free end.
    let forward = matches!(anchor, LiftAnchor::Initial(_));
    let base: Vec<Vertex> = if forward {
        path.vertices().to_vec()
    } else {
        let mut v = path.vertices().to_vec();
        v.reverse();
        v
    };
    let mut chain = vec![anchor_vertex];
    let mut out = Vec::new();
    lift_dfs(&base, p, s, r, forward, &mut chain, &mut out);
    out.sort();
    Ok(out)
}

fn lift_dfs(
    base: &[Vertex],
    p: u64,
    s: u32,
    r: u32,
    forward: bool,
    chain: &mut Vec<Vertex>,
    out: &mut Vec<Path>,
) {
    if chain.len() == base.len() {
        let mut vertices = chain.clone();
        if !forward {
            vertices.reverse();
        }
        out.push(Path::new(vertices).expect("lift construction preserves edges"));
        return;
    }
    let prev = *chain.last().expect("chain starts at the anchor");
    for cand in vertex_fiber(&base[chain.len()], p, s, r) {
        let ok = if forward {
            is_edge(&prev, &cand)
        } else {
            is_edge(&cand, &prev)
        }
        .expect("fiber stays in one modulus");
        if ok {
            chain.push(cand);
            lift_dfs(base, p, s, r, forward, chain, out);
            chain.pop();
        }
    }
}

/// All vertices of E_{p^r} reducing to v in E_{p^s}: both coordinates move
/// by multiples of p^s.
fn vertex_fiber(v: &Vertex, p: u64, s: u32, r: u32) -> Vec<Vertex> {
    let ps = p.pow(s);
    let pr = p.pow(r);
    let steps = p.pow(r - s);
    let mut fiber = Vec::with_capacity((steps * steps) as usize);
    for i in 0..steps {
        for j in 0..steps {
            fiber.push(
                Vertex::new(v.a() + i * ps, v.b() + j * ps, pr)
                    .expect("adding multiples of p^s preserves the vertex condition"),
            );
        }
    }
    fiber
}

/// The unique vertex v with u -> v -> w a path, for u = a/b, w = c/d in a
/// prime-power graph: v = μ(a+c)/μ(b+d) where μ inverts ad−bc. The two
/// edge congruences form a linear system whose determinant is −(ad−bc),
/// so a unique middle vertex exists exactly when ad−bc is a unit — which
/// holds in particular when b, c are units mod p and p divides a or d.
pub fn middle_vertex(u: &Vertex, w: &Vertex) -> Result<Vertex, PathCountError> {
    let n = u.modulus();
    if modring::factorize(n).as_prime_power().is_none() {
        return Err(PathCountError::InvalidParams(format!(
            "middle vertex needs a prime-power modulus, got {n}"
        )));
    }
    let det = pair_det(u, w)?;
    let mu = modring::inverse(&det).map_err(|_| {
        PathCountError::PreconditionViolated(format!(
            "u={u}, w={w} mod {n}: pair determinant {} is not a unit",
            det.value()
        ))
    })?;
    let (a, b) = (u.a(), u.b());
    let (c, d) = (w.a(), w.b());
    let x = mu.mul(&modring::Residue::new((a + c) % n, n));
    let y = mu.mul(&modring::Residue::new((b + d) % n, n));
    let v = Vertex::new(x.value(), y.value(), n).expect("middle vertex is a valid vertex");
    debug_assert!(is_edge(u, &v).unwrap() && is_edge(&v, w).unwrap());
    Ok(v)
}

/// True when the path contains a two-step window a/b -> c/e -> (-e)/0
/// (residues mod p, e = ±1) with b a unit mod p. Such a window forces the
/// middle vertex of any lift, so paths containing one lift in exactly
/// p^{(r-s)(length-2)} ways; the alternating Omega paths never contain one,
/// which is what makes them the hard case for lifting.
pub fn has_liftable_subpath(path: &Path, p: u64) -> bool {
    assert!(modring::is_prime(p), "p must be prime, got {p}");
    assert_eq!(
        path.modulus() % p,
        0,
        "path modulus {} is not a power of {p}",
        path.modulus()
    );
    let vs = path.vertices();
    let signs: [u64; 2] = [1 % p, (p - 1) % p];
    (1..path.length()).any(|j| {
        let (u, v, w) = (&vs[j - 1], &vs[j], &vs[j + 1]);
        if u.b() % p == 0 {
            return false;
        }
        signs
            .iter()
            .any(|&e| v.b() % p == e && w.b() % p == 0 && w.a() % p == (p - e) % p)
    })
}

/// All p^k alternating paths 1/0 -> λ_1/1 -> -1/0 -> λ_2/-1 -> ... of
/// length 2k in E_p, sorted.
pub fn enumerate_omega(p: u64, k: u32) -> Vec<Path> {
    assert!(modring::is_prime(p), "p must be prime, got {p}");
    assert!(k >= 1);
    let total = p.pow(k);
    let mut out = Vec::with_capacity(total as usize);
    for code in 0..total {
        let mut lambdas = Vec::with_capacity(k as usize);
        let mut rest = code;
        for _ in 0..k {
            lambdas.push(rest % p);
            rest /= p;
        }
        out.push(omega_path(p, &lambdas));
    }
    out.sort();
    out
}

fn omega_path(p: u64, lambdas: &[u64]) -> Path {
    let mut vertices = Vec::with_capacity(2 * lambdas.len() + 1);
    vertices.push(Vertex::from_signed(1, 0, p).unwrap());
    for (i, &lambda) in lambdas.iter().enumerate() {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        vertices.push(Vertex::from_signed(lambda as i64, sign, p).unwrap());
        vertices.push(Vertex::from_signed(-sign, 0, p).unwrap());
    }
    Path::new(vertices).expect("the alternating pattern always forms a path")
}

/// True when the path has the exact alternating shape of the Omega family:
/// even positions (-1)^i/0, odd positions λ/(-1)^i.
pub fn is_omega_path(path: &Path) -> bool {
    let m = path.length();
    if m < 2 || !m.is_multiple_of(2) {
        return false;
    }
    let n = path.modulus();
    path.vertices().iter().enumerate().all(|(j, v)| {
        let i = j / 2;
        let sign = if i % 2 == 0 { 1 } else { -1 };
        if j % 2 == 0 {
            *v == Vertex::from_signed(sign, 0, n).expect("±1/0 is a vertex")
        } else {
            v.b()
                == Vertex::from_signed(0, sign, n)
                    .expect("0/±1 is a vertex")
                    .b()
        }
    })
}

/// Per-position sets of allowed vertex indices for masked counting.
#[derive(Clone, Debug)]
pub struct TransferMask {
    sets: Vec<Vec<usize>>,
}

impl TransferMask {
    pub fn new(sets: Vec<Vec<usize>>) -> Result<Self, PathCountError> {
        if sets.len() < 2 {
            return Err(PathCountError::InvalidParams(
                "a mask needs at least two positions".to_string(),
            ));
        }
        if let Some(i) = sets.iter().position(Vec::is_empty) {
            return Err(PathCountError::InvalidParams(format!(
                "mask position {i} allows no vertices"
            )));
        }
        let mut sets = sets;
        for s in &mut sets {
            s.sort_unstable();
            s.dedup();
        }
        Ok(TransferMask { sets })
    }

    /// Number of positions (path length + 1).
    pub fn positions(&self) -> usize {
        self.sets.len()
    }

    pub fn length(&self) -> usize {
        self.sets.len() - 1
    }

    pub fn set(&self, i: usize) -> &[usize] {
        &self.sets[i]
    }
}

/// Exact number of paths threading the mask: position-i vertex must lie in
/// the i-th allowed set.
pub fn count_masked_paths(g: &FareyGraph, mask: &TransferMask) -> BigUint {
    let count = g.vertex_count();
    for s in &mask.sets {
        assert!(
            s.iter().all(|&i| i < count),
            "mask indexes beyond the graph"
        );
    }
    let mut counts = vec![BigUint::zero(); count];
    for &i in mask.set(0) {
        counts[i] = BigUint::one();
    }
    for pos in 1..mask.positions() {
        counts = advance(g, &counts, Some(mask.set(pos)));
    }
    mask.set(mask.positions() - 1)
        .iter()
        .fold(BigUint::zero(), |acc, &i| acc + &counts[i])
}

/// DFS oracle for [`count_masked_paths`], returning the actual paths.
pub fn enumerate_masked_paths(
    g: &FareyGraph,
    mask: &TransferMask,
    limit: usize,
) -> Result<Vec<Path>, PathCountError> {
    let count = g.vertex_count();
    let member: Vec<Vec<bool>> = mask
        .sets
        .iter()
        .map(|s| {
            let mut bits = vec![false; count];
            for &i in s {
                bits[i] = true;
            }
            bits
        })
        .collect();
    let mut out = Vec::new();
    let mut chain = Vec::new();
    for &start in mask.set(0) {
        chain.push(start);
        masked_dfs(g, &member, &mut chain, limit, &mut out)?;
        chain.pop();
    }
    out.sort();
    Ok(out)
}

fn masked_dfs(
    g: &FareyGraph,
    member: &[Vec<bool>],
    chain: &mut Vec<usize>,
    limit: usize,
    out: &mut Vec<Path>,
) -> Result<(), PathCountError> {
    if chain.len() == member.len() {
        if out.len() == limit {
            return Err(PathCountError::LimitExceeded {
                limit,
                found: limit + 1,
            });
        }
        out.push(path_from_indices(g, chain));
        return Ok(());
    }
    let pos = chain.len();
    let current = *chain.last().unwrap();
    for &j in g.out_neighbors(current) {
        if member[pos][j] {
            chain.push(j);
            masked_dfs(g, member, chain, limit, out)?;
            chain.pop();
        }
    }
    Ok(())
}

/// Final-vertex condition for lifts of Omega paths.
#[derive(Clone, Copy, Debug)]
pub enum OmegaLiftTarget {
    /// The final vertex is pinned exactly (the Z and W families).
    ExactFinal(Vertex),
    /// The final vertex is (ε+a)/b with ν_p(b) = t and ν_p(a) ≥ t
    /// (the Z_t classification; requires 1 ≤ t < r).
    ValuationClass { t: u32 },
}

/// Masks describing the lifts to E_{p^r} of Omega_2k(p) paths with initial
/// vertex exactly 1/0: even positions lie over (−1)^i/0, odd positions
/// over λ/(−1)^i, and the final position obeys `target`.
pub fn omega_lift_mask(
    g: &FareyGraph,
    k: u32,
    target: OmegaLiftTarget,
) -> Result<TransferMask, PathCountError> {
    let pp = modring::factorize(g.n()).as_prime_power().ok_or_else(|| {
        PathCountError::InvalidParams(format!(
            "Omega lifts need a prime-power modulus, got {}",
            g.n()
        ))
    })?;
    let (p, r) = (pp.prime, pp.exponent);
    if k < 1 {
        return Err(PathCountError::InvalidParams(
            "k must be at least 1".to_string(),
        ));
    }
    let n = g.n();
    let eps: i64 = if k.is_multiple_of(2) { 1 } else { -1 };
    let eps_vertex = Vertex::from_signed(eps, 0, n).expect("±1/0 is a vertex");

    let mut sets = Vec::with_capacity(2 * k as usize + 1);
    let start = Vertex::new(1, 0, n).expect("1/0 is always a vertex");
    sets.push(vec![index_of(g, &start)?]);
    for j in 1..2 * k {
        let i = (j / 2) as usize;
        let sign = if i.is_multiple_of(2) { 1 % p } else { p - 1 };
        let allowed: Vec<usize> = g
            .vertices()
            .iter()
            .enumerate()
            .filter(|(_, v)| {
                if j % 2 == 0 {
                    v.a() % p == sign && v.b() % p == 0
                } else {
                    v.b() % p == sign
                }
            })
            .map(|(i, _)| i)
            .collect();
        sets.push(allowed);
    }

    let last = match target {
        OmegaLiftTarget::ExactFinal(v) => {
            if v.a() % p != eps_vertex.a() % p || v.b() % p != 0 {
                return Err(PathCountError::InvalidParams(format!(
                    "final vertex {v} does not lie over {}/0 mod {p}",
                    eps_vertex.a() % p
                )));
            }
            vec![index_of(g, &v)?]
        }
        OmegaLiftTarget::ValuationClass { t } => {
            if t < 1 || t >= r {
                return Err(PathCountError::InvalidParams(format!(
                    "valuation class needs 1 <= t < r, got t={t}, r={r}"
                )));
            }
            g.vertices()
                .iter()
                .enumerate()
                .filter(|(_, v)| {
                    let a = (v.a() + n - eps_vertex.a()) % n;
                    modring::valuation(v.b(), p) == Valuation::Finite(t)
                        && modring::valuation(a, p) >= Valuation::Finite(t)
                })
                .map(|(i, _)| i)
                .collect()
        }
    };
    sets.push(last);
    TransferMask::new(sets)
}

/// |Z_k(r)|: lifts of Omega_2k(p) paths to E_{p^r} from 1/0 to exactly
/// ε/0, ε = (−1)^k.
pub fn count_z(p: u64, r: u32, k: u32) -> Result<BigUint, PathCountError> {
    validate_prime_exp(p, r, k)?;
    let n = p.pow(r);
    let g = FareyGraph::build(n)?;
    let eps: i64 = if k.is_multiple_of(2) { 1 } else { -1 };
    let final_v = Vertex::from_signed(eps, 0, n).expect("±1/0 is a vertex");
    let mask = omega_lift_mask(&g, k, OmegaLiftTarget::ExactFinal(final_v))?;
    Ok(count_masked_paths(&g, &mask))
}

/// |Z_k(r,t)|: as [`count_z`] but with the final vertex in the valuation
/// class (ε+a)/b, ν_p(b) = t, ν_p(a) ≥ t.
pub fn count_z_t(p: u64, r: u32, k: u32, t: u32) -> Result<BigUint, PathCountError> {
    validate_prime_exp(p, r, k)?;
    if t < 1 || t >= r {
        return Err(PathCountError::InvalidParams(format!(
            "need 1 <= t < r, got t={t}, r={r}"
        )));
    }
    let g = FareyGraph::build(p.pow(r))?;
    let mask = omega_lift_mask(&g, k, OmegaLiftTarget::ValuationClass { t })?;
    Ok(count_masked_paths(&g, &mask))
}

/// |W_k(r)|: lifts of Omega_2k(2) paths (k even) to E_{2^r} from 1/0 to
/// −1/0. Zero at r = 1, where −1/0 coincides with 1/0 and the family is
/// empty by definition.
pub fn count_w(r: u32, k: u32) -> Result<BigUint, PathCountError> {
    if !k.is_multiple_of(2) {
        return Err(PathCountError::InvalidParams(format!(
            "the W family needs even k, got {k}"
        )));
    }
    validate_prime_exp(2, r, k)?;
    if r == 1 {
        return Ok(BigUint::zero());
    }
    let n = 2u64.pow(r);
    let g = FareyGraph::build(n)?;
    let final_v = Vertex::from_signed(-1, 0, n).expect("-1/0 is a vertex");
    let mask = omega_lift_mask(&g, k, OmegaLiftTarget::ExactFinal(final_v))?;
    Ok(count_masked_paths(&g, &mask))
}

fn validate_prime_exp(p: u64, r: u32, k: u32) -> Result<(), PathCountError> {
    if !modring::is_prime(p) {
        return Err(PathCountError::InvalidParams(format!("{p} is not prime")));
    }
    if r < 1 || k < 1 {
        return Err(PathCountError::InvalidParams(format!(
            "need r >= 1 and k >= 1, got r={r}, k={k}"
        )));
    }
    Ok(())
}

/// Weighted walk count from 1/0 to −1/0 of length k in the condensed
/// 4-vertex graph on {1/0, −1/0, 1/2, −1/2} over E_4, whose edge weights
/// are two-step path counts (4 between the ±1/0 pair and between the ±1/2
/// pair, 2 otherwise). Its k-th matrix power counts |W_k(2)|.
pub fn aux_graph_counts(k: u32) -> BigUint {
    assert!(k >= 1);
    const ADJ: [[u32; 4]; 4] = [[0, 4, 2, 2], [4, 0, 2, 2], [2, 2, 0, 4], [2, 2, 4, 0]];
    let mut counts = [
        BigUint::one(),
        BigUint::zero(),
        BigUint::zero(),
        BigUint::zero(),
    ];
    for _ in 0..k {
        let mut next = [
            BigUint::zero(),
            BigUint::zero(),
            BigUint::zero(),
            BigUint::zero(),
        ];
        for (j, slot) in next.iter_mut().enumerate() {
            for (i, row) in ADJ.iter().enumerate() {
                *slot += &counts[i] * row[j];
            }
        }
        counts = next;
    }
    counts[1].clone()
}

/// Identifies a path-family count request.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum PathFamilyQuery {
    X { n: u64, m: u32 },
    Y { n: u64, m: u32 },
    Omega { p: u64, k: u32 },
    Z { p: u64, r: u32, k: u32 },
    ZT { p: u64, r: u32, k: u32, t: u32 },
    W { r: u32, k: u32 },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountMethod {
    Formula,
    TransferMatrix,
    Dfs,
}

/// A count plus how it was obtained. Serializes the count as a decimal
/// string; the elapsed time is kept for logs but excluded from JSON so
/// that outputs stay byte-stable.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CountReport<Q> {
    pub query: Q,
    pub method: CountMethod,
    #[serde(with = "decimal_string")]
    pub count: BigUint,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl<Q> CountReport<Q> {
    pub fn measure(query: Q, method: CountMethod, f: impl FnOnce() -> BigUint) -> Self {
        let start = Instant::now();
        let count = f();
        CountReport {
            query,
            method,
            count,
            elapsed: start.elapsed(),
        }
    }
}

/// Serde adapter: big naturals as decimal strings, immune to integer-width
/// loss in JSON consumers.
pub mod decimal_string {
    use num_bigint::BigUint;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse::<BigUint>()
            .map_err(|e| D::Error::custom(format!("bad decimal string: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn v(a: i64, b: i64, n: u64) -> Vertex {
        Vertex::from_signed(a, b, n).unwrap()
    }

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn count_paths_basics() {
        let g = FareyGraph::build(2).unwrap();
        let u = v(1, 0, 2);
        let w = v(0, 1, 2);
        assert_eq!(count_paths(&g, &u, &u, 0).unwrap(), big(1));
        assert_eq!(count_paths(&g, &u, &w, 0).unwrap(), big(0));
        assert_eq!(count_paths(&g, &u, &w, 1).unwrap(), big(1));
        // complete digraph on 3 vertices: closed 4-walks = (2^4 + 2)/3
        assert_eq!(count_paths(&g, &u, &u, 4).unwrap(), big(6));

        let stranger = v(1, 0, 3);
        assert!(matches!(
            count_paths(&g, &stranger, &u, 1),
            Err(PathCountError::VertexNotInGraph(_, 2))
        ));
    }

    #[test]
    fn enumeration_matches_counts() {
        for n in 2..=6 {
            let g = FareyGraph::build(n).unwrap();
            let targets = [v(1, 0, n), v(0, 1, n), v(1, 1, n)];
            for u in &targets {
                for w in &targets {
                    for m in 1..=4 {
                        let listed = enumerate_paths(&g, u, w, m, 1_000_000).unwrap();
                        let counted = count_paths(&g, u, w, m).unwrap();
                        assert_eq!(big(listed.len() as u64), counted, "n={n} m={m} {u}->{w}");
                        let mut sorted = listed.clone();
                        sorted.sort();
                        assert_eq!(listed, sorted, "enumeration comes out sorted");
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_details() {
        let g = FareyGraph::build(2).unwrap();
        let u = v(1, 0, 2);
        let paths = enumerate_paths(&g, &u, &u, 2, 100).unwrap();
        assert_eq!(paths.len(), 2); // via 0/1 and via 1/1
        for p in &paths {
            assert_eq!(p.first(), &u);
            assert_eq!(p.last(), &u);
            assert_eq!(p.length(), 2);
        }

        // non-adjacent endpoints at length 1
        assert!(enumerate_paths(&g, &u, &u, 1, 100).unwrap().is_empty());

        match enumerate_paths(&g, &u, &u, 4, 3) {
            Err(PathCountError::LimitExceeded { limit: 3, found: 4 }) => {}
            other => panic!("expected LimitExceeded, got {other:?}"),
        }
    }

    #[test]
    fn path_validation() {
        assert!(Path::new(vec![v(1, 0, 5)]).is_err());
        assert!(Path::new(vec![v(1, 0, 5), v(1, 0, 5)]).is_err());
        let p = Path::new(vec![v(1, 0, 5), v(0, 1, 5), v(-1, 1, 5)]).unwrap();
        assert_eq!(p.length(), 2);
        assert_eq!(p.to_string(), "1/0 -> 0/1 -> 4/1");
        assert_eq!(p.reduce(5).unwrap(), p);
    }

    #[test]
    fn x_family_counts() {
        // closed form over prime fields: (p^{m-1} + (-1)^m) / (p + 1)
        for p in [2u64, 3, 5] {
            let g = FareyGraph::build(p).unwrap();
            for m in 2..=7u32 {
                let expect =
                    (p.pow(m - 1) as i64 + if m % 2 == 0 { 1 } else { -1 }) as u64 / (p + 1);
                assert_eq!(count_x(&g, m).unwrap(), big(expect), "p={p} m={m}");
            }
        }

        let g2 = FareyGraph::build(2).unwrap();
        assert_eq!(count_x(&g2, 3).unwrap(), big(1));
        let g4 = FareyGraph::build(4).unwrap();
        assert_eq!(count_x(&g4, 3).unwrap(), big(2)); // φ(4)·2 = 4 tame friezes
        let g3 = FareyGraph::build(3).unwrap();
        assert_eq!(count_x(&g3, 4).unwrap(), big(7));

        assert!(matches!(
            count_x(&g2, 1),
            Err(PathCountError::InvalidParams(_))
        ));
    }

    #[test]
    fn unique_shortest_x_path() {
        // the only member of X_3(2): 1/0 -> 0/1 -> 1/1 -> 1/0
        let g = FareyGraph::build(2).unwrap();
        let paths = enumerate_paths(&g, &v(0, 1, 2), &v(1, 0, 2), 2, 100).unwrap();
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].vertices(), &[v(0, 1, 2), v(1, 1, 2), v(1, 0, 2)]);
    }

    #[test]
    fn y_family_counts() {
        let g2 = FareyGraph::build(2).unwrap();
        assert_eq!(count_y(&g2, 4).unwrap(), big(6));
        let g4 = FareyGraph::build(4).unwrap();
        assert_eq!(count_y(&g4, 5).unwrap(), big(80));
        for n in 2..=8 {
            let g = FareyGraph::build(n).unwrap();
            for m in 1..=6 {
                let y = count_y(&g, m).unwrap();
                assert!(
                    (&y % n).is_zero(),
                    "n={n} m={m}: |Y| = {y} not divisible by n"
                );
            }
        }
        assert!(matches!(
            count_y(&g2, 0),
            Err(PathCountError::InvalidParams(_))
        ));
    }

    #[test]
    fn lift_single_edge() {
        // 1/0 -> 0/1 in E_p lifts to p paths 1/0 -> (a·p)/1 in E_{p^2}
        for p in [2u64, 3, 5] {
            let base = Path::new(vec![v(1, 0, p), v(0, 1, p)]).unwrap();
            let anchor = LiftAnchor::Initial(v(1, 0, p * p));
            let lifts = lift_paths(&base, 2, anchor).unwrap();
            assert_eq!(lifts.len(), p as usize);
            for l in &lifts {
                assert_eq!(l.first(), &v(1, 0, p * p));
                assert_eq!(l.last().b(), 1);
                assert_eq!(l.last().a() % p, 0);
                assert_eq!(l.reduce(p).unwrap(), base);
            }
        }
    }

    #[test]
    fn lift_counts_and_roundtrip() {
        // all length-3 paths in E_2, lifted to E_8: 2^{2·3} = 64 lifts each
        let g = FareyGraph::build(2).unwrap();
        let u = v(1, 0, 2);
        for w in [v(1, 0, 2), v(0, 1, 2), v(1, 1, 2)] {
            for base in enumerate_paths(&g, &u, &w, 3, 1000).unwrap() {
                for anchor_vertex in vertex_fiber(base.first(), 2, 1, 3) {
                    let lifts = lift_paths(&base, 3, LiftAnchor::Initial(anchor_vertex)).unwrap();
                    assert_eq!(lifts.len(), 64);
                    for l in &lifts {
                        assert_eq!(l.reduce(2).unwrap(), base);
                        assert_eq!(l.first(), &anchor_vertex);
                    }
                }
                // reverse-anchored lifting at one final-vertex lift
                let final_lift = vertex_fiber(base.last(), 2, 1, 3)[1];
                let lifts = lift_paths(&base, 3, LiftAnchor::Final(final_lift)).unwrap();
                assert_eq!(lifts.len(), 64);
                for l in &lifts {
                    assert_eq!(l.last(), &final_lift);
                    assert_eq!(l.reduce(2).unwrap(), base);
                }
            }
        }
    }

    #[test]
    fn lift_rejects_mismatched_anchor() {
        let base = Path::new(vec![v(1, 0, 2), v(0, 1, 2)]).unwrap();
        let wrong = v(0, 1, 4); // reduces to 0/1, not to the initial vertex 1/0
        assert!(matches!(
            lift_paths(&base, 2, LiftAnchor::Initial(wrong)),
            Err(PathCountError::BadAnchor { .. })
        ));
        let not_prime_power = Path::new(vec![v(1, 0, 6), v(0, 1, 6)]).unwrap();
        assert!(matches!(
            lift_paths(&not_prime_power, 2, LiftAnchor::Initial(v(1, 0, 36))),
            Err(PathCountError::InvalidParams(_))
        ));
    }

    #[test]
    fn middle_vertex_examples() {
        let u = v(1, 1, 4);
        let w = v(0, 1, 4);
        let mid = middle_vertex(&u, &w).unwrap();
        assert_eq!(mid, v(1, 2, 4));
        assert!(is_edge(&u, &mid).unwrap());
        assert!(is_edge(&mid, &w).unwrap());

        // pair determinant 0: no unique middle vertex
        assert!(matches!(
            middle_vertex(&v(1, 1, 4), &v(1, 1, 4)),
            Err(PathCountError::PreconditionViolated(_))
        ));
        assert!(matches!(
            middle_vertex(&v(1, 0, 6), &v(0, 1, 6)),
            Err(PathCountError::InvalidParams(_))
        ));
    }

    #[test]
    fn middle_vertex_unique_by_scan() {
        for n in [4u64, 9] {
            let g = FareyGraph::build(n).unwrap();
            let p = if n == 4 { 2 } else { 3 };
            let mut qualifying = 0;
            for u in g.vertices() {
                for w in g.vertices() {
                    let precondition =
                        u.b() % p != 0 && w.a() % p != 0 && (u.a() % p == 0 || w.b() % p == 0);
                    if !precondition {
                        continue;
                    }
                    qualifying += 1;
                    let scan: Vec<&Vertex> = g
                        .vertices()
                        .iter()
                        .filter(|x| is_edge(u, x).unwrap() && is_edge(x, w).unwrap())
                        .collect();
                    assert_eq!(scan.len(), 1, "u={u}, w={w} mod {n}");
                    assert_eq!(*scan[0], middle_vertex(u, w).unwrap());
                }
            }
            assert!(qualifying > 0);
        }
    }

    #[test]
    fn omega_enumeration() {
        assert_eq!(enumerate_omega(2, 1).len(), 2);
        let omega = enumerate_omega(3, 2);
        assert_eq!(omega.len(), 9);
        for path in &omega {
            assert_eq!(path.last(), &v(1, 0, 3), "ε = 1 for even k");
            assert!(is_omega_path(path));
            assert!(!has_liftable_subpath(path, 3));
        }
        for p in [2u64, 3, 5] {
            for k in 1..=3 {
                let omega = enumerate_omega(p, k);
                assert_eq!(omega.len(), p.pow(k) as usize);
                let mut dedup = omega.clone();
                dedup.dedup();
                assert_eq!(dedup.len(), omega.len());
                for path in &omega {
                    assert!(is_omega_path(path));
                    assert!(!has_liftable_subpath(path, p));
                }
            }
        }
    }

    #[test]
    fn omega_shape_rejections() {
        // a semiclosed path that strays from ±1/0 at an even position
        let p = Path::new(vec![
            v(1, 0, 2),
            v(0, 1, 2),
            v(1, 1, 2),
            v(0, 1, 2),
            v(1, 0, 2),
        ])
        .unwrap();
        assert!(!is_omega_path(&p));
        assert!(has_liftable_subpath(&p, 2));
        // odd length can never be an alternating family member
        let q = Path::new(vec![v(1, 0, 3), v(0, 1, 3), v(-1, 0, 3), v(1, -1, 3)]).unwrap();
        assert!(!is_omega_path(&q));
        // but its even prefix is one
        let prefix = Path::new(q.vertices()[..3].to_vec()).unwrap();
        assert!(is_omega_path(&prefix));
    }

    #[test]
    fn masked_counts_match_enumeration() {
        let g = FareyGraph::build(4).unwrap();
        let final_v = v(1, 0, 4);
        let mask = omega_lift_mask(&g, 2, OmegaLiftTarget::ExactFinal(final_v)).unwrap();
        let counted = count_masked_paths(&g, &mask);
        let listed = enumerate_masked_paths(&g, &mask, 10_000).unwrap();
        assert_eq!(counted, big(listed.len() as u64));
        assert_eq!(counted, big(24));
        for path in &listed {
            assert!(is_omega_path(&path.reduce(2).unwrap()));
            assert_eq!(path.first(), &v(1, 0, 4));
            assert_eq!(path.last(), &final_v);
        }
    }

    #[test]
    fn z_family_base_cases() {
        for p in [2u64, 3] {
            for r in 1..=3 {
                assert_eq!(count_z(p, r, 1).unwrap(), big(p.pow(r)), "p={p} r={r}");
            }
        }
        assert_eq!(count_z(2, 2, 2).unwrap(), big(24));
        assert_eq!(count_z(3, 2, 2).unwrap(), big(135));
        // at r = 1 the lifts are the Omega paths themselves
        for p in [2u64, 3, 5] {
            for k in 1..=3 {
                assert_eq!(count_z(p, 1, k).unwrap(), big(p.pow(k)));
            }
        }
        assert!(matches!(
            count_z(6, 2, 2),
            Err(PathCountError::InvalidParams(_))
        ));
    }

    #[test]
    fn z_t_counts_by_enumeration() {
        let g = FareyGraph::build(8).unwrap();
        for t in 1..=2u32 {
            let mask = omega_lift_mask(&g, 2, OmegaLiftTarget::ValuationClass { t }).unwrap();
            let listed = enumerate_masked_paths(&g, &mask, 100_000).unwrap();
            assert_eq!(
                count_z_t(2, 3, 2, t).unwrap(),
                big(listed.len() as u64),
                "t={t}"
            );
            for path in listed.iter().take(50) {
                let last = path.last();
                assert_eq!(modring::valuation(last.b(), 2), Valuation::Finite(t));
            }
        }
        assert!(matches!(
            count_z_t(2, 2, 2, 0),
            Err(PathCountError::InvalidParams(_))
        ));
        assert!(matches!(
            count_z_t(2, 2, 2, 2),
            Err(PathCountError::InvalidParams(_))
        ));
    }

    #[test]
    fn w_family_counts() {
        assert_eq!(count_w(1, 2).unwrap(), big(0));
        assert_eq!(count_w(1, 4).unwrap(), big(0));
        assert_eq!(count_w(2, 2).unwrap(), big(8));
        assert_eq!(count_w(3, 2).unwrap(), big(32));
        assert!(matches!(
            count_w(2, 3),
            Err(PathCountError::InvalidParams(_))
        ));
    }

    #[test]
    fn condensed_graph_walks() {
        assert_eq!(aux_graph_counts(1), big(4));
        assert_eq!(aux_graph_counts(2), big(8));
        assert_eq!(aux_graph_counts(4), big(896));
        // even-k walks in the condensed graph are exactly |W_k(2)|
        for k in [2u32, 4] {
            assert_eq!(aux_graph_counts(k), count_w(2, k).unwrap(), "k={k}");
        }
    }

    #[test]
    fn report_serialization() {
        let report = CountReport::measure(
            PathFamilyQuery::Y { n: 2, m: 4 },
            CountMethod::TransferMatrix,
            || big(6),
        );
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["query"]["family"], "y");
        assert_eq!(json["query"]["n"], 2);
        assert_eq!(json["method"], "transfer-matrix");
        assert_eq!(json["count"], "6");
        assert!(json.get("elapsed").is_none(), "elapsed stays out of JSON");

        let zt = serde_json::to_value(PathFamilyQuery::ZT {
            p: 2,
            r: 3,
            k: 2,
            t: 1,
        })
        .unwrap();
        assert_eq!(zt["family"], "z-t");
    }

    #[test]
    fn big_counts_survive_string_roundtrip() {
        let huge = BigUint::parse_bytes(b"123456789012345678901234567890123456789", 10).unwrap();
        assert!(huge.to_u64().is_none());
        let s = serde_json::to_string(&huge.to_string()).unwrap();
        let back: String = serde_json::from_str(&s).unwrap();
        assert_eq!(back.parse::<BigUint>().unwrap(), huge);
    }
}
