//! The Farey graph E_n over Z/nZ: vertices are formal fractions a/b with
//! gcd(a, b, n) = 1 and there is a directed edge a/b -> c/d exactly when
//! ad - bc = 1 in Z/nZ.
//!
//! The module also carries the structure used to move between moduli:
//! the SL2(Z/nZ) action (simply transitive on directed edges), the
//! componentwise reduction map to a divisor modulus, vertex lifting from
//! E_{p^{r-1}} to E_{p^r}, the tensor product of directed graphs, and the
//! CRT isomorphism E_mn = E_m (x) E_n for coprime m, n.

use crate::modring::{self, gcd, Residue};
use serde::Serialize;
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("modulus {0} is not supported (need n >= 2)")]
    InvalidModulus(u64),
    #[error("operands live over different moduli ({0} vs {1})")]
    ModulusMismatch(u64, u64),
    #[error("(a, b) = ({a}, {b}) is not a vertex mod {modulus}: gcd(a, b, n) != 1")]
    NotAVertex { a: u64, b: u64, modulus: u64 },
    #[error("{0} does not divide {1}")]
    NotADivisor(u64, u64),
    #[error("moduli {0} and {1} are not coprime")]
    ModuliNotCoprime(u64, u64),
    #[error("matrix entries do not have determinant 1 mod {0}")]
    NotUnimodular(u64),
    #[error("({from}, {to}) is not a directed edge")]
    NotAnEdge { from: String, to: String },
    #[error("vertex {0} does not belong to the graph over {1}")]
    VertexNotInGraph(String, u64),
}

/// A vertex a/b of E_n. Ordering is lexicographic on (a, b), which is the
/// canonical vertex order used everywhere.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Vertex {
    modulus: u64,
    a: u64,
    b: u64,
}

impl Vertex {
    /// Reduce the pair mod n and validate gcd(a, b, n) = 1.
    pub fn new(a: u64, b: u64, modulus: u64) -> Result<Self, GraphError> {
        if modulus < 1 {
            return Err(GraphError::InvalidModulus(modulus));
        }
        let a = a % modulus;
        let b = b % modulus;
        if gcd(gcd(a, b), modulus) != 1 {
            return Err(GraphError::NotAVertex { a, b, modulus });
        }
        Ok(Vertex { modulus, a, b })
    }

    /// Like [`Vertex::new`] but accepting negative representatives, so that
    /// -1/0 means (n-1)/0.
    pub fn from_signed(a: i64, b: i64, modulus: u64) -> Result<Self, GraphError> {
        let m = modulus as i64;
        Vertex::new(a.rem_euclid(m) as u64, b.rem_euclid(m) as u64, modulus)
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The vertex (-a)/(-b). An involution; the identity when n = 2.
    pub fn negate(&self) -> Vertex {
        Vertex {
            modulus: self.modulus,
            a: (self.modulus - self.a) % self.modulus,
            b: (self.modulus - self.b) % self.modulus,
        }
    }

    /// Componentwise reduction to a divisor modulus m | n with m >= 2.
    /// A graph homomorphism: edges map to edges.
    pub fn reduce(&self, m: u64) -> Result<Vertex, GraphError> {
        if m < 2 || !self.modulus.is_multiple_of(m) {
            return Err(GraphError::NotADivisor(m, self.modulus));
        }
        // gcd(a mod m, b mod m, m) divides gcd(a, b, n) = 1
        Ok(Vertex {
            modulus: m,
            a: self.a % m,
            b: self.b % m,
        })
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.a, self.b)
    }
}

/// Determinant a*d - b*c of the pair (u, w) = (a/b, c/d), as a residue.
pub fn pair_det(u: &Vertex, w: &Vertex) -> Result<Residue, GraphError> {
    if u.modulus != w.modulus {
        return Err(GraphError::ModulusMismatch(u.modulus, w.modulus));
    }
    let n = u.modulus;
    let ad = modring::mul_mod(u.a, w.b, n);
    let bc = modring::mul_mod(u.b, w.a, n);
    Ok(Residue::new(ad, n).sub(&Residue::new(bc, n)))
}

/// True when u -> w is a directed edge (determinant 1 mod n).
pub fn is_edge(u: &Vertex, w: &Vertex) -> Result<bool, GraphError> {
    Ok(pair_det(u, w)?.value() == 1 % u.modulus)
}

/// True when u = lambda * w componentwise for some unit lambda.
pub fn equivalent(u: &Vertex, w: &Vertex) -> Result<bool, GraphError> {
    if u.modulus != w.modulus {
        return Err(GraphError::ModulusMismatch(u.modulus, w.modulus));
    }
    let n = u.modulus;
    Ok(modring::units(n).iter().any(|lambda| {
        modring::mul_mod(lambda.value(), w.a, n) == u.a
            && modring::mul_mod(lambda.value(), w.b, n) == u.b
    }))
}

/// All p^2 preimages in E_{p^r} of a vertex of E_{p^{r-1}} under
/// componentwise reduction.
pub fn vertex_lifts(v: &Vertex, p: u64, r: u32) -> Vec<Vertex> {
    assert!(r >= 1, "vertex_lifts requires r >= 1");
    let source = p.pow(r - 1);
    assert_eq!(
        v.modulus(),
        source,
        "vertex lives mod {} but expected mod p^(r-1) = {}",
        v.modulus(),
        source
    );
    let target = p.pow(r);
    let mut lifts = Vec::with_capacity((p * p) as usize);
    for i in 0..p {
        for j in 0..p {
            let a = v.a + i * source;
            let b = v.b + j * source;
            // gcd(a, b, p) is unchanged by adding multiples of p^{r-1}
            lifts.push(Vertex::new(a, b, target).expect("lift stays a vertex"));
        }
    }
    lifts.sort();
    lifts
}

/// An element of SL2(Z/nZ), acting on vertices by
/// x/y -> (a x + b y)/(c x + d y).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Mat2 {
    modulus: u64,
    a: u64,
    b: u64,
    c: u64,
    d: u64,
}

impl Mat2 {
    pub fn new(a: u64, b: u64, c: u64, d: u64, modulus: u64) -> Result<Self, GraphError> {
        if modulus < 1 {
            return Err(GraphError::InvalidModulus(modulus));
        }
        let m = Mat2 {
            modulus,
            a: a % modulus,
            b: b % modulus,
            c: c % modulus,
            d: d % modulus,
        };
        if m.det() != 1 % modulus {
            return Err(GraphError::NotUnimodular(modulus));
        }
        Ok(m)
    }

    pub fn from_signed(a: i64, b: i64, c: i64, d: i64, modulus: u64) -> Result<Self, GraphError> {
        let m = modulus as i64;
        Mat2::new(
            a.rem_euclid(m) as u64,
            b.rem_euclid(m) as u64,
            c.rem_euclid(m) as u64,
            d.rem_euclid(m) as u64,
            modulus,
        )
    }

    pub fn identity(modulus: u64) -> Self {
        Mat2 {
            modulus,
            a: 1 % modulus,
            b: 0,
            c: 0,
            d: 1 % modulus,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn entries(&self) -> (u64, u64, u64, u64) {
        (self.a, self.b, self.c, self.d)
    }

    fn det(&self) -> u64 {
        let n = self.modulus;
        let ad = Residue::new(modring::mul_mod(self.a, self.d, n), n);
        let bc = Residue::new(modring::mul_mod(self.b, self.c, n), n);
        ad.sub(&bc).value()
    }

    /// Apply the action to a vertex. Preserves the vertex invariant and
    /// maps edges to edges.
    pub fn apply(&self, v: &Vertex) -> Result<Vertex, GraphError> {
        if self.modulus != v.modulus {
            return Err(GraphError::ModulusMismatch(self.modulus, v.modulus));
        }
        let n = self.modulus;
        let x = v.a;
        let y = v.b;
        let a = (modring::mul_mod(self.a, x, n) + modring::mul_mod(self.b, y, n)) % n;
        let b = (modring::mul_mod(self.c, x, n) + modring::mul_mod(self.d, y, n)) % n;
        Vertex::new(a, b, n)
    }

    pub fn mul(&self, other: &Mat2) -> Result<Mat2, GraphError> {
        if self.modulus != other.modulus {
            return Err(GraphError::ModulusMismatch(self.modulus, other.modulus));
        }
        let n = self.modulus;
        let mm = |x, y| modring::mul_mod(x, y, n);
        Mat2::new(
            (mm(self.a, other.a) + mm(self.b, other.c)) % n,
            (mm(self.a, other.b) + mm(self.b, other.d)) % n,
            (mm(self.c, other.a) + mm(self.d, other.c)) % n,
            (mm(self.c, other.b) + mm(self.d, other.d)) % n,
            n,
        )
    }

    /// Inverse of a determinant-1 matrix: the adjugate.
    pub fn inverse(&self) -> Mat2 {
        let n = self.modulus;
        Mat2 {
            modulus: n,
            a: self.d,
            b: (n - self.b) % n,
            c: (n - self.c) % n,
            d: self.a,
        }
    }

    /// Reduce all entries to a divisor modulus.
    pub fn reduce(&self, m: u64) -> Result<Mat2, GraphError> {
        if m < 2 || !self.modulus.is_multiple_of(m) {
            return Err(GraphError::NotADivisor(m, self.modulus));
        }
        Mat2::new(self.a % m, self.b % m, self.c % m, self.d % m, m)
    }
}

/// A validated directed edge of some E_n.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct DirectedEdge {
    from: Vertex,
    to: Vertex,
}

impl DirectedEdge {
    pub fn new(from: Vertex, to: Vertex) -> Result<Self, GraphError> {
        if !is_edge(&from, &to)? {
            return Err(GraphError::NotAnEdge {
                from: from.to_string(),
                to: to.to_string(),
            });
        }
        Ok(DirectedEdge { from, to })
    }

    pub fn from(&self) -> &Vertex {
        &self.from
    }

    pub fn to(&self) -> &Vertex {
        &self.to
    }
}

/// The unique SL2(Z/nZ) element carrying one directed edge onto another.
///
/// The action is simply transitive on directed edges, so the transporter
/// always exists: writing an edge u -> w as the matrix with columns u and
/// w (determinant 1), the transporter of e1 to e2 is M2 * M1^{-1}.
pub fn edge_transporter(e1: &DirectedEdge, e2: &DirectedEdge) -> Result<Mat2, GraphError> {
    let n = e1.from.modulus();
    if n != e2.from.modulus() {
        return Err(GraphError::ModulusMismatch(n, e2.from.modulus()));
    }
    let col = |e: &DirectedEdge| Mat2 {
        modulus: n,
        a: e.from.a,
        b: e.to.a,
        c: e.from.b,
        d: e.to.b,
    };
    let m1 = col(e1);
    let m2 = col(e2);
    let transporter = m2.mul(&m1.inverse())?;
    debug_assert_eq!(transporter.apply(&e1.from).unwrap(), e2.from);
    debug_assert_eq!(transporter.apply(&e1.to).unwrap(), e2.to);
    Ok(transporter)
}

/// E_n, fully materialized: canonically ordered vertex list plus forward
/// and reverse adjacency by vertex index.
#[derive(Clone, Debug)]
pub struct FareyGraph {
    n: u64,
    vertices: Vec<Vertex>,
    index: HashMap<(u64, u64), usize>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
}

impl FareyGraph {
    /// Build E_n by scanning all pairs. Vertices are ordered
    /// lexicographically by (a, b).
    pub fn build(n: u64) -> Result<Self, GraphError> {
        if n < 2 {
            return Err(GraphError::InvalidModulus(n));
        }
        let mut vertices = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if gcd(gcd(a, b), n) == 1 {
                    vertices.push(Vertex { modulus: n, a, b });
                }
            }
        }
        let index: HashMap<(u64, u64), usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| ((v.a, v.b), i))
            .collect();
        let count = vertices.len();
        let mut out_adj = vec![Vec::new(); count];
        let mut in_adj = vec![Vec::new(); count];
        for (i, u) in vertices.iter().enumerate() {
            for (j, w) in vertices.iter().enumerate() {
                if is_edge(u, w).expect("same modulus") {
                    out_adj[i].push(j);
                    in_adj[j].push(i);
                }
            }
        }
        Ok(FareyGraph {
            n,
            vertices,
            index,
            out_adj,
            in_adj,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out_adj.iter().map(Vec::len).sum()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, idx: usize) -> &Vertex {
        &self.vertices[idx]
    }

    pub fn vertex_index(&self, v: &Vertex) -> Option<usize> {
        if v.modulus != self.n {
            return None;
        }
        self.index.get(&(v.a, v.b)).copied()
    }

    pub fn require_index(&self, v: &Vertex) -> Result<usize, GraphError> {
        self.vertex_index(v)
            .ok_or_else(|| GraphError::VertexNotInGraph(v.to_string(), self.n))
    }

    pub fn out_neighbors(&self, idx: usize) -> &[usize] {
        &self.out_adj[idx]
    }

    pub fn in_neighbors(&self, idx: usize) -> &[usize] {
        &self.in_adj[idx]
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.out_adj[from].binary_search(&to).is_ok()
    }

    /// DOT serialization with sorted vertex and edge records.
    pub fn to_dot(&self) -> String {
        let mut s = format!("digraph farey_{} {{\n", self.n);
        for v in &self.vertices {
            s.push_str(&format!("  \"{v}\";\n"));
        }
        for (i, targets) in self.out_adj.iter().enumerate() {
            for &j in targets {
                s.push_str(&format!(
                    "  \"{}\" -> \"{}\";\n",
                    self.vertices[i], self.vertices[j]
                ));
            }
        }
        s.push_str("}\n");
        s
    }

    /// JSON-friendly export: vertex labels "a/b" plus one record per edge.
    pub fn to_export(&self) -> GraphExport {
        GraphExport {
            n: self.n,
            vertices: self.vertices.iter().map(Vertex::to_string).collect(),
            edges: self
                .out_adj
                .iter()
                .enumerate()
                .flat_map(|(i, targets)| {
                    targets.iter().map(move |&j| EdgeRecord {
                        from: self.vertices[i].to_string(),
                        to: self.vertices[j].to_string(),
                    })
                })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct GraphExport {
    pub n: u64,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeRecord>,
}

#[derive(Debug, Serialize)]
pub struct EdgeRecord {
    pub from: String,
    pub to: String,
}

/// Closed form for |V(E_n)| = n^2 prod_{p|n} (1 - p^{-2}), n >= 2.
/// Independent of the scan in [`FareyGraph::build`]; the two are checked
/// against each other in the verification suites.
pub fn vertex_count_formula(n: u64) -> u64 {
    assert!(n >= 2);
    modring::factorize(n)
        .prime_powers()
        .iter()
        .map(|pp| {
            let p = pp.prime;
            p.pow(2 * pp.exponent - 2) * (p * p - 1)
        })
        .product()
}

/// |SL2(Z/nZ)| = n^3 prod_{p|n} (1 - p^{-2}) = the number of directed
/// edges of E_n.
pub fn sl2_order(n: u64) -> u64 {
    assert!(n >= 2);
    modring::factorize(n)
        .prime_powers()
        .iter()
        .map(|pp| {
            let p = pp.prime;
            p.pow(3 * pp.exponent - 2) * (p * p - 1)
        })
        .product()
}

/// Tensor product of two directed graphs on Farey vertices: vertices are
/// pairs, and (u1, v1) -> (u2, v2) is an edge iff both components are.
#[derive(Clone, Debug)]
pub struct TensorGraph {
    vertices: Vec<(Vertex, Vertex)>,
    index: HashMap<(Vertex, Vertex), usize>,
    out_adj: Vec<Vec<usize>>,
}

impl TensorGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out_adj.iter().map(Vec::len).sum()
    }

    pub fn vertices(&self) -> &[(Vertex, Vertex)] {
        &self.vertices
    }

    pub fn vertex_index(&self, pair: &(Vertex, Vertex)) -> Option<usize> {
        self.index.get(pair).copied()
    }

    pub fn has_edge(&self, from: &(Vertex, Vertex), to: &(Vertex, Vertex)) -> bool {
        match (self.vertex_index(from), self.vertex_index(to)) {
            (Some(i), Some(j)) => self.out_adj[i].binary_search(&j).is_ok(),
            _ => false,
        }
    }

    pub fn out_degree(&self, idx: usize) -> usize {
        self.out_adj[idx].len()
    }
}

pub fn tensor_product(g: &FareyGraph, h: &FareyGraph) -> TensorGraph {
    let mut vertices = Vec::with_capacity(g.vertex_count() * h.vertex_count());
    for u in g.vertices() {
        for v in h.vertices() {
            vertices.push((*u, *v));
        }
    }
    let index: HashMap<(Vertex, Vertex), usize> = vertices
        .iter()
        .enumerate()
        .map(|(i, pair)| (*pair, i))
        .collect();
    let hn = h.vertex_count();
    let mut out_adj = vec![Vec::new(); vertices.len()];
    for (gi, _) in g.vertices().iter().enumerate() {
        for &gj in g.out_neighbors(gi) {
            for (hi, _) in h.vertices().iter().enumerate() {
                for &hj in h.out_neighbors(hi) {
                    out_adj[gi * hn + hi].push(gj * hn + hj);
                }
            }
        }
    }
    for adj in &mut out_adj {
        adj.sort_unstable();
    }
    TensorGraph {
        vertices,
        index,
        out_adj,
    }
}

/// Split a vertex of E_mn into its E_m and E_n components (coprime m, n).
pub fn crt_iso_alpha(v: &Vertex, m: u64, n: u64) -> Result<(Vertex, Vertex), GraphError> {
    if gcd(m, n) != 1 {
        return Err(GraphError::ModuliNotCoprime(m, n));
    }
    if m < 2 || n < 2 {
        return Err(GraphError::InvalidModulus(m.min(n)));
    }
    if v.modulus() != m * n {
        return Err(GraphError::ModulusMismatch(v.modulus(), m * n));
    }
    Ok((v.reduce(m)?, v.reduce(n)?))
}

/// Inverse of [`crt_iso_alpha`]: combine componentwise by CRT.
pub fn crt_iso_beta(v1: &Vertex, v2: &Vertex) -> Result<Vertex, GraphError> {
    let (m, n) = (v1.modulus(), v2.modulus());
    if gcd(m, n) != 1 {
        return Err(GraphError::ModuliNotCoprime(m, n));
    }
    let combine = |x: u64, y: u64| -> u64 {
        modring::crt_combine(&Residue::new(x, m), &Residue::new(y, n))
            .expect("moduli checked coprime")
            .value()
    };
    Vertex::new(combine(v1.a, v2.a), combine(v1.b, v2.b), m * n)
}
