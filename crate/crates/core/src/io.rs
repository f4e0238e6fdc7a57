//! JSON file formats shared by the library and the CLI.
//!
//! - matrix: `{"n": 3, "entries": [[null,1,3],[5,null,4],[7,8,null]]}`
//!   with `null` encoding ε;
//! - DBM: `{"n": 3, "bounds": [...], "strict": [...]}` over `x_0..x_n`
//!   with index 0 the dummy variable; unconstrained entries are `null`
//!   with `strict: true` (the normalized vacuous sign);
//! - union: `{"n": 3, "parts": [<dbm>, ...]}`;
//! - PWA system: array of `{"coefficient", "dbm", "dynamics"}` objects,
//!   coefficients and dynamics in plain n-variable indexing (columns are
//!   1-based, matching hand calculations);
//! - transition system: `{"states": [...], "transitions": [[1,7], ...]}`
//!   with 1-based state ids in partition order.
//!
//! Emission is deterministic (fixed field order, compact one-line
//! documents); parsing validates shapes and reports offending positions.

use serde::{Deserialize, Serialize};

use crate::abstraction::TransitionSystem;
use crate::dbm::{Dbm, Sign};
use crate::pwa::{PwaSystem, Region};
use crate::reach::DbmUnion;
use crate::tropical::{FiniteCoefficient, TropicalMatrix, TropicalScalar};
use crate::{Error, Result};

#[derive(Serialize, Deserialize)]
struct MatrixDoc {
    n: usize,
    entries: Vec<Vec<Option<i64>>>,
}

#[derive(Serialize, Deserialize)]
struct DbmDoc {
    n: usize,
    bounds: Vec<Vec<Option<i64>>>,
    strict: Vec<Vec<bool>>,
}

#[derive(Serialize, Deserialize)]
struct UnionDoc {
    n: usize,
    parts: Vec<DbmDoc>,
}

#[derive(Serialize, Deserialize)]
struct RegionDoc {
    coefficient: Vec<usize>,
    dbm: DbmDoc,
    dynamics: MatrixDoc,
}

#[derive(Serialize, Deserialize)]
struct StateDoc {
    id: usize,
    coefficient: Vec<usize>,
    dbm: DbmDoc,
    dynamics: MatrixDoc,
}

#[derive(Serialize, Deserialize)]
struct TsDoc {
    states: Vec<StateDoc>,
    transitions: Vec<(usize, usize)>,
}

#[derive(Serialize)]
struct StepDoc {
    k: i64,
    parts: Vec<DbmDoc>,
}

fn from_json<'a, T: Deserialize<'a>>(text: &'a str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn to_json<T: Serialize>(doc: &T) -> String {
    serde_json::to_string(doc).expect("documents serialize infallibly")
}

// ---- matrices ----

fn matrix_doc(m: &TropicalMatrix) -> MatrixDoc {
    MatrixDoc {
        n: m.rows(),
        entries: (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m.get(i, j).finite()).collect())
            .collect(),
    }
}

fn matrix_from_doc(doc: &MatrixDoc, what: &str) -> Result<TropicalMatrix> {
    if doc.entries.len() != doc.n {
        return Err(Error::Parse(format!(
            "{what}: expected {} rows, found {}",
            doc.n,
            doc.entries.len()
        )));
    }
    for (i, row) in doc.entries.iter().enumerate() {
        if row.len() != doc.n {
            return Err(Error::Parse(format!(
                "{what}: not square, n = {} but row {} has {} entries",
                doc.n,
                i,
                row.len()
            )));
        }
    }
    TropicalMatrix::from_rows(&doc.entries)
}

/// Parse a system matrix document.
pub fn parse_matrix(text: &str) -> Result<TropicalMatrix> {
    matrix_from_doc(&from_json(text, "matrix")?, "matrix")
}

pub fn matrix_to_json(m: &TropicalMatrix) -> String {
    to_json(&matrix_doc(m))
}

// ---- DBMs ----

fn dbm_doc(d: &Dbm) -> DbmDoc {
    let dim = d.dim();
    DbmDoc {
        n: d.n(),
        bounds: (0..dim)
            .map(|i| (0..dim).map(|j| d.bound(i, j).finite()).collect())
            .collect(),
        strict: (0..dim)
            .map(|i| (0..dim).map(|j| d.sign(i, j).is_strict()).collect())
            .collect(),
    }
}

fn dbm_from_doc(doc: &DbmDoc, what: &str) -> Result<Dbm> {
    let dim = doc.n + 1;
    for (name, rows) in [("bounds", doc.bounds.len()), ("strict", doc.strict.len())] {
        if rows != dim {
            return Err(Error::Parse(format!(
                "{what}: {name} must be {dim}x{dim} (n+1 with the dummy variable), found {rows} rows"
            )));
        }
    }
    let mut bounds = TropicalMatrix::new(dim, dim);
    let mut signs = vec![Sign::Strict; dim * dim];
    for i in 0..dim {
        if doc.bounds[i].len() != dim || doc.strict[i].len() != dim {
            return Err(Error::Parse(format!(
                "{what}: row {i} has {} bounds and {} signs, expected {dim}",
                doc.bounds[i].len(),
                doc.strict[i].len()
            )));
        }
        for j in 0..dim {
            if let Some(v) = doc.bounds[i][j] {
                bounds.set(i, j, TropicalScalar::Finite(v));
                signs[i * dim + j] = if doc.strict[i][j] {
                    Sign::Strict
                } else {
                    Sign::NonStrict
                };
            }
            // null bounds keep the normalized (ε, strict) regardless of
            // the sign stored in the file
        }
    }
    Ok(Dbm::from_parts(bounds, signs, false))
}

/// Parse a DBM document. The result is treated as raw (not canonical).
pub fn parse_dbm(text: &str) -> Result<Dbm> {
    dbm_from_doc(&from_json(text, "dbm")?, "dbm")
}

pub fn dbm_to_json(d: &Dbm) -> String {
    to_json(&dbm_doc(d))
}

// ---- unions ----

/// Parse a set of states: either a union document or a bare DBM document
/// (treated as a one-part union). Parts are canonicalized; empty parts are
/// dropped.
pub fn parse_union(text: &str) -> Result<DbmUnion> {
    let value: serde_json::Value = from_json(text, "state set")?;
    if value.get("parts").is_some() {
        let doc: UnionDoc = from_json(text, "union")?;
        let mut parts = Vec::new();
        for (k, part) in doc.parts.iter().enumerate() {
            if part.n != doc.n {
                return Err(Error::Parse(format!(
                    "union: part {k} has n = {}, union has n = {}",
                    part.n, doc.n
                )));
            }
            let dbm = dbm_from_doc(part, &format!("union part {k}"))?.canonical_form();
            if !dbm.is_empty() {
                parts.push(dbm);
            }
        }
        Ok(DbmUnion::from_parts(doc.n, parts))
    } else {
        Ok(DbmUnion::from_dbm(&parse_dbm(text)?))
    }
}

pub fn union_to_json(u: &DbmUnion) -> String {
    to_json(&UnionDoc {
        n: u.n(),
        parts: u.parts().iter().map(dbm_doc).collect(),
    })
}

/// One forward/backward reach step as its own document; `k` is negative
/// for backward steps.
pub fn reach_step_to_json(k: i64, u: &DbmUnion) -> String {
    to_json(&StepDoc {
        k,
        parts: u.parts().iter().map(dbm_doc).collect(),
    })
}

// ---- PWA systems and transition systems ----

fn external_coefficient(r: &Region) -> Vec<usize> {
    r.coefficient().cols()[1..].to_vec()
}

fn region_parts_from_doc(
    n: usize,
    coefficient: &[usize],
    dbm: &DbmDoc,
    dynamics: &MatrixDoc,
    what: &str,
) -> Result<Region> {
    if coefficient.len() != n {
        return Err(Error::Parse(format!(
            "{what}: coefficient has {} entries, expected {n}",
            coefficient.len()
        )));
    }
    if coefficient.iter().any(|&c| c < 1 || c > n) {
        return Err(Error::Parse(format!(
            "{what}: coefficient entries must lie in 1..={n}"
        )));
    }
    if dbm.n != n || dynamics.n != n {
        return Err(Error::Parse(format!(
            "{what}: mixed dimensions (dbm n = {}, dynamics n = {}, expected {n})",
            dbm.n, dynamics.n
        )));
    }
    let zone = dbm_from_doc(dbm, what)?.canonical_form();
    if zone.is_empty() {
        return Err(Error::Parse(format!("{what}: region zone is empty")));
    }
    let raw_dynamics = matrix_from_doc(dynamics, what)?;
    let augmented_coefficient = FiniteCoefficient::new(
        std::iter::once(0)
            .chain(coefficient.iter().copied())
            .collect(),
    );
    let dynamics = raw_dynamics.augment_zero();
    for (i, &gi) in augmented_coefficient.cols().iter().enumerate().skip(1) {
        for j in 0..dynamics.cols() {
            let finite = dynamics.get(i, j).is_finite();
            if finite != (j == gi) {
                return Err(Error::Parse(format!(
                    "{what}: dynamics row {i} must have exactly one finite entry at column {gi}"
                )));
            }
        }
    }
    Ok(Region::from_parts(augmented_coefficient, zone, dynamics))
}

/// Serialize the regions of a PWA system as a JSON array.
pub fn pwa_to_json(pwa: &PwaSystem) -> String {
    let docs: Vec<RegionDoc> = pwa
        .regions()
        .iter()
        .map(|r| RegionDoc {
            coefficient: external_coefficient(r),
            dbm: dbm_doc(r.zone()),
            dynamics: matrix_doc(&r.dynamics_raw()),
        })
        .collect();
    to_json(&docs)
}

pub fn transition_system_to_json(ts: &TransitionSystem) -> String {
    let states: Vec<StateDoc> = ts
        .states()
        .iter()
        .enumerate()
        .map(|(idx, r)| StateDoc {
            id: idx + 1,
            coefficient: external_coefficient(r),
            dbm: dbm_doc(r.zone()),
            dynamics: matrix_doc(&r.dynamics_raw()),
        })
        .collect();
    let transitions: Vec<(usize, usize)> = ts
        .transitions()
        .iter()
        .map(|&(i, j)| (i + 1, j + 1))
        .collect();
    to_json(&TsDoc {
        states,
        transitions,
    })
}

/// Parse a transition-system document (1-based ids on the wire).
pub fn parse_transition_system(text: &str) -> Result<TransitionSystem> {
    let doc: TsDoc = from_json(text, "transition system")?;
    let count = doc.states.len();
    let mut states = Vec::with_capacity(count);
    for (idx, state) in doc.states.iter().enumerate() {
        if state.id != idx + 1 {
            return Err(Error::Parse(format!(
                "transition system: state ids must be 1..{count} in order, found {} at position {}",
                state.id,
                idx + 1
            )));
        }
        let what = format!("state {}", state.id);
        states.push(region_parts_from_doc(
            state.dbm.n,
            &state.coefficient,
            &state.dbm,
            &state.dynamics,
            &what,
        )?);
    }
    let mut transitions = Vec::with_capacity(doc.transitions.len());
    for &(i, j) in &doc.transitions {
        if i < 1 || i > count || j < 1 || j > count {
            return Err(Error::Parse(format!(
                "transition system: transition ({i},{j}) out of range 1..={count}"
            )));
        }
        transitions.push((i - 1, j - 1));
    }
    Ok(TransitionSystem::from_parts(states, transitions))
}
