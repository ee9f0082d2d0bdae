//! The count, table, graph, and render commands.

use std::env;
use std::path::PathBuf;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use frieze_core::{
    count_x, count_y, enumerate_paths, regular_count_formula, render_from_path, tame_count_formula,
    totient, CountMethod, CountReport, FareyGraph, FriezeCountQuery, FriezeKind, Vertex,
};

use crate::cache::CountCache;
use crate::{
    bounds, usage_error, GraphFormatArg, KindArg, MethodArg, RenderFormatArg, TableFormatArg,
};

/// A formula/enumeration pair for one query, with the agreement flag.
#[derive(Serialize)]
pub struct CountPair {
    pub formula: CountReport<FriezeCountQuery>,
    pub enumerated: CountReport<FriezeCountQuery>,
    #[serde(rename = "match")]
    pub matches: bool,
}

/// The closed-form count for a query.
pub fn formula_count(kind: FriezeKind, n: u64, m: u32) -> BigUint {
    match kind {
        FriezeKind::Tame => tame_count_formula(n, m),
        FriezeKind::Regular => regular_count_formula(n, m),
    }
}

/// The independent enumerated count for a query, via transfer-matrix path
/// counting in the graph over Z/nZ.
pub fn enumerated_count(kind: FriezeKind, g: &FareyGraph, m: u32) -> BigUint {
    match kind {
        FriezeKind::Tame => BigUint::from(totient(g.n())) * count_x(g, m).expect("m >= 2"),
        FriezeKind::Regular => {
            let total = count_y(g, m).expect("m >= 1");
            let n = BigUint::from(g.n());
            assert!(
                (&total % &n).is_zero(),
                "semiclosed path count must divide by n"
            );
            total / n
        }
    }
}

fn measured_formula(kind: FriezeKind, n: u64, m: u32) -> CountReport<FriezeCountQuery> {
    CountReport::measure(
        FriezeCountQuery::new(kind, n, m),
        CountMethod::Formula,
        || formula_count(kind, n, m),
    )
}

fn measured_enumeration(kind: FriezeKind, g: &FareyGraph, m: u32) -> CountReport<FriezeCountQuery> {
    CountReport::measure(
        FriezeCountQuery::new(kind, g.n(), m),
        CountMethod::TransferMatrix,
        || enumerated_count(kind, g, m),
    )
}

/// The cache directory from the environment, if configured.
fn cache_dir() -> Option<PathBuf> {
    env::var_os("FRIEZE_CACHE_DIR").map(PathBuf::from)
}

/// Wraps a count computation with a cache lookup when `cache` is given.
fn cached_count(
    cache: Option<&mut CountCache>,
    kind: KindArg,
    n: u64,
    m: u32,
    method: &str,
    compute: impl FnOnce() -> BigUint,
) -> BigUint {
    let Some(cache) = cache else {
        return compute();
    };
    let key = CountCache::key(kind.name(), n, m, method);
    if let Some(hit) = cache.lookup(&key) {
        if let Ok(value) = BigUint::from_str(hit) {
            return value;
        }
    }
    let value = compute();
    if let Err(e) = cache.store(&key, &value.to_string()) {
        eprintln!("warning: could not persist cache entry: {e}");
    }
    value
}

pub fn cmd_count(
    kind: KindArg,
    n: u64,
    m: u32,
    method: MethodArg,
    cache: bool,
    unsafe_large: bool,
) -> u8 {
    if n < 2 || m < 2 {
        return usage_error("count requires n >= 2 and m >= 2");
    }
    if !unsafe_large && (n > bounds::COUNT_N || m > bounds::COUNT_M) {
        return usage_error(&format!(
            "count is bounded to n <= {} and m <= {} by default; pass --unsafe-large to override",
            bounds::COUNT_N,
            bounds::COUNT_M
        ));
    }
    let mut store = if cache {
        let Some(dir) = cache_dir() else {
            return usage_error("--cache requires the FRIEZE_CACHE_DIR environment variable");
        };
        match CountCache::open(&dir) {
            Ok(c) => Some(c),
            Err(e) => return usage_error(&format!("cannot open cache: {e}")),
        }
    } else {
        None
    };

    let core_kind = kind.to_kind();
    let formula = |store: Option<&mut CountCache>| {
        let mut report = measured_formula(core_kind, n, m);
        report.count = cached_count(store, kind, n, m, "formula", || report.count.clone());
        report
    };
    let enumerated = |store: Option<&mut CountCache>| {
        let g = FareyGraph::build(n).expect("n >= 2");
        let mut report = measured_enumeration(core_kind, &g, m);
        report.count = cached_count(store, kind, n, m, "enumerate", || report.count.clone());
        report
    };

    match method {
        MethodArg::Formula => {
            let report = formula(store.as_mut());
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            0
        }
        MethodArg::Enumerate => {
            let report = enumerated(store.as_mut());
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            0
        }
        MethodArg::Both => {
            let f = formula(store.as_mut());
            let e = enumerated(store.as_mut());
            let matches = f.count == e.count;
            let pair = CountPair {
                formula: f,
                enumerated: e,
                matches,
            };
            println!("{}", serde_json::to_string_pretty(&pair).unwrap());
            if matches {
                0
            } else {
                eprintln!("error: formula and enumeration disagree");
                1
            }
        }
    }
}

pub fn cmd_table(
    kind: KindArg,
    n_max: u32,
    m_max: u32,
    format: TableFormatArg,
    unsafe_large: bool,
) -> u8 {
    if n_max < 2 || m_max < 2 {
        return usage_error("table requires n-max >= 2 and m-max >= 2");
    }
    if !unsafe_large && (n_max > bounds::TABLE_N || m_max > bounds::TABLE_M) {
        return usage_error(&format!(
            "table is bounded to n-max <= {} and m-max <= {} by default; \
             pass --unsafe-large to override",
            bounds::TABLE_N,
            bounds::TABLE_M
        ));
    }
    let core_kind = kind.to_kind();
    let mut rows = Vec::new();
    let mut all_match = true;
    for n in 2..=u64::from(n_max) {
        let g = FareyGraph::build(n).expect("n >= 2");
        for m in 2..=m_max {
            let f = measured_formula(core_kind, n, m);
            let e = measured_enumeration(core_kind, &g, m);
            let matches = f.count == e.count;
            all_match &= matches;
            rows.push(CountPair {
                formula: f,
                enumerated: e,
                matches,
            });
        }
    }
    match format {
        TableFormatArg::Csv => {
            let mut out = String::from("kind,n,m,formula,enumerated,match\n");
            for row in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    kind.name(),
                    row.formula.query.n,
                    row.formula.query.m,
                    row.formula.count,
                    row.enumerated.count,
                    row.matches
                ));
            }
            print!("{out}");
        }
        TableFormatArg::Json => {
            println!("{}", serde_json::to_string_pretty(&rows).unwrap());
        }
    }
    if all_match {
        0
    } else {
        eprintln!("error: at least one table row disagrees");
        1
    }
}

pub fn cmd_graph(n: u64, format: GraphFormatArg, unsafe_large: bool) -> u8 {
    if n < 2 {
        return usage_error("graph requires n >= 2");
    }
    if !unsafe_large && n > bounds::GRAPH_N {
        return usage_error(&format!(
            "graph is bounded to n <= {} by default; pass --unsafe-large to override",
            bounds::GRAPH_N
        ));
    }
    let g = FareyGraph::build(n).expect("n >= 2");
    match format {
        GraphFormatArg::Dot => print!("{}", g.to_dot()),
        GraphFormatArg::Json => {
            println!("{}", serde_json::to_string_pretty(&g.to_export()).unwrap())
        }
    }
    0
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_render(
    n: u64,
    m: u32,
    index: Option<u64>,
    seed: Option<u64>,
    periods: u32,
    format: RenderFormatArg,
    unsafe_large: bool,
) -> u8 {
    if n < 2 || m < 2 {
        return usage_error("render requires n >= 2 and m >= 2");
    }
    if periods < 1 {
        return usage_error("render requires periods >= 1");
    }
    if !unsafe_large && (n > bounds::RENDER_N || m > bounds::RENDER_M) {
        return usage_error(&format!(
            "render is bounded to n <= {} and m <= {} by default; \
             pass --unsafe-large to override",
            bounds::RENDER_N,
            bounds::RENDER_M
        ));
    }
    let g = FareyGraph::build(n).expect("n >= 2");
    let total = count_y(&g, m).expect("m >= 2");
    let Some(total) = total.to_u64() else {
        return usage_error("too many semiclosed paths to enumerate");
    };
    if total == 0 {
        return usage_error(&format!("no semiclosed paths exist for n={n}, m={m}"));
    }
    let chosen = match (index, seed) {
        (Some(i), _) => {
            if i >= total {
                return usage_error(&format!(
                    "index {i} out of range: only {total} semiclosed paths exist for n={n}, m={m}"
                ));
            }
            i
        }
        (None, Some(s)) => ChaCha8Rng::seed_from_u64(s).random_range(0..total),
        (None, None) => 0,
    };
    let origin = Vertex::new(1, 0, n).expect("1/0 is always a vertex");
    let paths = enumerate_paths(&g, &origin, &origin.negate(), m, total as usize)
        .expect("count bounds the enumeration");
    let window = match render_from_path(&paths[chosen as usize], periods) {
        Ok(w) => w,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let violations =
        window.check_boundary().len() + window.check_diamond().len() + window.check_tame().len();
    if violations > 0 || !window.is_regular() {
        eprintln!("error: rendered window failed its own validity checks");
        return 1;
    }
    match format {
        RenderFormatArg::Text => print!("{}", window.to_text()),
        RenderFormatArg::Json => println!("{}", window.to_json()),
    }
    0
}
