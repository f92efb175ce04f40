//! Browser bindings: abacus explorer, M-matrix view, Scopes representatives.
//! Every export returns a JSON string.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use morita::block::{m_matrix, Block};
use morita::scopes::{conjugation_pairing, enumerate_representatives_direct, scopes_count};
use morita::Partition;

const MAX_ROWS: usize = 400;
const MAX_CLASSES: usize = 20_000;

#[derive(Serialize)]
struct AbacusView {
    p: usize,
    beads: usize,
    /// `runners[i]` lists the bead rows on runner i, top row 0.
    runners: Vec<Vec<usize>>,
    rows: usize,
    core: String,
    quotient: Vec<String>,
    weight: usize,
    sign: i8,
}

#[derive(Serialize)]
struct MView {
    block: String,
    gamma_size: usize,
    labels: Vec<String>,
    quotients: Vec<String>,
    signs: Vec<i8>,
    heights: Vec<u64>,
    entries: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct ScopesView {
    p: usize,
    w: usize,
    count: usize,
    upper_bound: usize,
    representatives: Vec<(String, String)>,
}

fn json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

fn check_prime(p: usize) -> Result<(), String> {
    if morita::block::is_prime(p) {
        Ok(())
    } else {
        Err(format!("{p} is not prime"))
    }
}

pub fn abacus_json(partition: &str, p: usize) -> Result<String, String> {
    check_prime(p)?;
    let lambda: Partition = partition.parse().map_err(|e: morita::Error| e.to_string())?;
    let beads = lambda.len().div_ceil(p) * p;
    let mut runners = vec![Vec::new(); p];
    for b in lambda.beta_numbers(beads) {
        runners[b % p].push(b / p);
    }
    for r in &mut runners {
        r.sort_unstable();
    }
    let rows = runners.iter().flatten().max().map_or(1, |m| m + 2);
    let cd = lambda.core_quotient_sign(p);
    json(&AbacusView {
        p,
        beads,
        runners,
        rows,
        core: cd.core.to_string(),
        quotient: cd.quotient.slots.iter().map(|s| s.to_string()).collect(),
        weight: cd.weight,
        sign: cd.sign,
    })
}

pub fn m_matrix_json(p: usize, w: usize, core: &str) -> Result<String, String> {
    check_prime(p)?;
    let core: Partition = core.parse().map_err(|e: morita::Error| e.to_string())?;
    let rows = morita::partition::enumerate_multipartitions(p, w).len();
    if rows > MAX_ROWS {
        return Err(format!("{rows} characters is too many to display; try a smaller weight"));
    }
    let block = Block::new(p, w, core).map_err(|e| e.to_string())?;
    let inv = m_matrix(&block, None).map_err(|e| e.to_string())?;
    let rec = inv.m.to_record();
    json(&MView {
        block: block.to_string(),
        gamma_size: inv.gamma_size,
        labels: inv.records.iter().map(|r| r.lambda.to_string()).collect(),
        quotients: inv.records.iter().map(|r| r.quotient.to_string()).collect(),
        signs: inv.records.iter().map(|r| r.sign).collect(),
        heights: inv.records.iter().map(|r| r.height).collect(),
        entries: rec.entries,
    })
}

pub fn scopes_json(p: usize, w: usize) -> Result<String, String> {
    check_prime(p)?;
    if w == 0 {
        return Err("weight must be positive".into());
    }
    let count = scopes_count(p, w);
    if count > MAX_CLASSES {
        return Err(format!("{count} Scopes classes is too many to list"));
    }
    let mut reps = enumerate_representatives_direct(p, w).map_err(|e| e.to_string())?;
    let pairing = conjugation_pairing(&mut reps, p, w).map_err(|e| e.to_string())?;
    json(&ScopesView {
        p,
        w,
        count,
        upper_bound: pairing.upper_bound,
        representatives: reps
            .iter()
            .map(|c| (c.representative.to_string(), c.partner.as_ref().map(|x| x.to_string()).unwrap_or_default()))
            .collect(),
    })
}

#[wasm_bindgen]
pub fn abacus(partition: &str, p: usize) -> Result<String, JsValue> {
    abacus_json(partition, p).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn m_matrix_view(p: usize, w: usize, core: &str) -> Result<String, JsValue> {
    m_matrix_json(p, w, core).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn scopes_representatives(p: usize, w: usize) -> Result<String, JsValue> {
    scopes_json(p, w).map_err(|e| JsValue::from_str(&e))
}
