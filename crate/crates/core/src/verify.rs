//! Evaluation of the expected blocks stored in model files.

use crate::complexes::homology;
use crate::corpus::{self, CorpusEntry, ExpectedBlock, ModelFile, Tag};
use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::groups::invariants;
use crate::lfunctor::LComplex;
use crate::model::VarietyModel;
use crate::smithhat::{b_prime_case_checks, b_prime_value, build_hat_c, hat_e1_check, quotient_comparison, smith_decompose, smith_first_failure};
use crate::specseq::{hochschild_serre, Indexing, SpectralSequence};
use crate::weights::{
    beta_g_odd, equivariant_weight_ss, fixed_point_homology_relation, invariant_beta, invariant_betti_relation, odd_order_collapse_holds,
    row_table, top_row_check, virtual_betti,
};
use serde_json::{json, Value};

#[derive(Clone, Debug, serde::Serialize)]
pub struct BlockResult {
    pub entry: String,
    pub block: String,
    pub tag: Tag,
    pub kind: String,
    pub pass: bool,
    pub detail: String,
}

fn int(p: &Value, key: &str) -> Result<i64> {
    p.get(key).and_then(Value::as_i64).ok_or_else(|| Error::Parse(format!("missing integer parameter `{key}`")))
}

fn text<'a>(p: &'a Value, key: &str) -> Result<&'a str> {
    p.get(key).and_then(Value::as_str).ok_or_else(|| Error::Parse(format!("missing string parameter `{key}`")))
}

fn triples(v: &Value) -> Result<Vec<(i64, i64, i64)>> {
    let bad = || Error::Parse("expected a list of integer triples".into());
    v.as_array()
        .ok_or_else(bad)?
        .iter()
        .map(|t| {
            let t = t.as_array().filter(|t| t.len() == 3).ok_or_else(bad)?;
            let g = |i: usize| t[i].as_i64().ok_or_else(bad);
            Ok((g(0)?, g(1)?, g(2)?))
        })
        .collect()
}

fn pairs(v: &Value) -> Result<Vec<(i64, i64)>> {
    let bad = || Error::Parse("expected a list of integer pairs".into());
    v.as_array()
        .ok_or_else(bad)?
        .iter()
        .map(|t| {
            let t = t.as_array().filter(|t| t.len() == 2).ok_or_else(bad)?;
            Ok((t[0].as_i64().ok_or_else(bad)?, t[1].as_i64().ok_or_else(bad)?))
        })
        .collect()
}

/// Integer invariant selected by name, as used by `additivity` blocks.
pub fn invariant_value(v: &VarietyModel, kind: &str, k: i64) -> Result<i64> {
    match kind {
        "b_prime" => b_prime_value(v, k),
        "bkg" => row_table(&v.fk, None, v.default_contract(), v.flags.nash_faithful)?.bkg_value(k),
        "beta_g_odd" => Ok(beta_g_odd(&v.fk, k)?.value),
        "beta" => Ok(virtual_betti(&v.fk.filtration, k)),
        "invariant_beta" => Ok(invariant_beta(v, k)?.value),
        other => Err(Error::Parse(format!("unknown invariant `{other}`"))),
    }
}

fn descending(p: &Value) -> Result<Vec<i64>> {
    let (lo, hi) = (int(p, "kmin")?, int(p, "kmax")?);
    Ok((lo..=hi).rev().collect())
}

/// Class of a chain placed in column `col`, checked to survive to internal page `r`.
fn class_at(ss: &SpectralSequence, l: &LComplex, r: usize, key: (i64, i64), col: i64, degree: i64, chain: &BitVec) -> Result<BitVec> {
    let elem = l.chain_element(col, degree, chain).ok_or_else(|| Error::Parse(format!("no summand at column {col}, degree {degree}")))?;
    ss.class_from_leading(r, key.0, key.1, &elem)
        .ok_or_else(|| Error::Parse(format!("{} does not survive to the page", l.complex.describe(degree, chain))))
}

fn endpoint(p: &Value) -> Result<(String, i64, i64)> {
    Ok((text(p, "chain")?.to_string(), int(p, "col")?, int(p, "degree")?))
}

/// Checks `d^r(source) = target` (`target` may be the chain `"0"`).
fn differential_holds(v: &VarietyModel, ss: &SpectralSequence, l: &LComplex, r: usize, params: &Value, weight: bool) -> Result<(bool, String)> {
    let (sname, scol, sdeg) = endpoint(&params["source"])?;
    let (tname, tcol, tdeg) = endpoint(&params["target"])?;
    let key = |col: i64, deg: i64, at: &Value| -> Result<(i64, i64)> {
        if weight {
            let at = at.as_array().ok_or_else(|| Error::Parse("weight endpoints need `at`".into()))?;
            let (pp, qq) = (at[0].as_i64().unwrap_or(0), at[1].as_i64().unwrap_or(0));
            let k = Indexing::Weight.to_key(pp, qq);
            if k.1 != col + deg {
                return Err(Error::Parse(format!("`at` ({pp},{qq}) is not in total degree {}", col + deg)));
            }
            Ok(k)
        } else {
            Ok((col, col + deg))
        }
    };
    let sk = key(scol, sdeg, &params["source"]["at"])?;
    let (_, sc) = v.chain(&sname)?;
    let x = class_at(ss, l, r, sk, scol, sdeg, &sc)?;
    let d = ss.apply_d(r, sk.0, sk.1, &x);
    if tname == "0" {
        return Ok((d.is_zero(), format!("d({sname}) has coordinates {:?}", d.ones())));
    }
    let tk = key(tcol, tdeg, &params["target"]["at"])?;
    if tk != (sk.0 - r as i64, sk.1 - 1) {
        return Err(Error::Parse("target is not where the differential lands".into()));
    }
    let (_, tc) = v.chain(&tname)?;
    let y = class_at(ss, l, r, tk, tcol, tdeg, &tc)?;
    Ok((!y.is_zero() && d == y, format!("d({sname}) = {:?}, [{tname}] = {:?}", d.ones(), y.ones())))
}

fn chain_text(v: &VarietyModel, degree: i64, expected: &str) -> String {
    match v.named_chains.get(expected) {
        Some((q, c)) if *q == degree => v.complex().describe(degree, c),
        _ => expected.to_string(),
    }
}

fn evaluate(v: &VarietyModel, b: &ExpectedBlock) -> Result<(bool, String)> {
    let contract = v.default_contract();
    let p = &b.params;
    let want = &b.values;
    let same = |got: Value| (got == *want, format!("got {got}"));
    match b.kind.as_str() {
        "equivariant_homology" => {
            let l = LComplex::new(v.complex(), None, contract)?;
            let got = descending(p)?.into_iter().map(|k| Ok(json!([k, l.homology_dim(k)?]))).collect::<Result<Vec<_>>>()?;
            Ok(same(Value::Array(got)))
        }
        "hs_page" | "hs_differential" | "hs_converged_at" => {
            let l = LComplex::new(v.complex(), None, contract)?;
            let ss = hochschild_serre(&l, contract.r_max);
            match b.kind.as_str() {
                "hs_page" => {
                    let r = int(p, "page")? as usize;
                    let got = triples(want)?.into_iter().map(|(pp, q, _)| Ok(json!([pp, q, ss.dim(Some(r), pp, q)?]))).collect::<Result<Vec<_>>>()?;
                    Ok(same(Value::Array(got)))
                }
                "hs_differential" => differential_holds(v, &ss, &l, int(p, "page")? as usize, p, false),
                // The sequence starts at E².
                _ => Ok(same(json!(ss.converged_at().map(|r| r.max(2))))),
            }
        }
        "weight_page" | "weight_differential" | "weight_converged_at" | "omega" => {
            let eq = equivariant_weight_ss(&v.fk, None, contract, None)?;
            match b.kind.as_str() {
                "weight_page" => {
                    let r = int(p, "page")? as usize;
                    let got = triples(want)?.into_iter().map(|(pp, q, _)| Ok(json!([pp, q, eq.dim(Some(r), pp, q)?]))).collect::<Result<Vec<_>>>()?;
                    Ok(same(Value::Array(got)))
                }
                "weight_differential" => {
                    let r = int(p, "page")? as usize - Indexing::Weight.page_offset();
                    differential_holds(v, &eq.ss, eq.l(), r, p, true)
                }
                "omega" => {
                    let got = triples(want)?.into_iter().map(|(k, a, _)| Ok(json!([k, a, eq.omega_dim(k, a)?]))).collect::<Result<Vec<_>>>()?;
                    Ok(same(Value::Array(got)))
                }
                _ => Ok(same(json!(eq.ss.converged_at()))),
            }
        }
        "beta" | "beta_g_odd" | "invariant_beta" => {
            let got = pairs(want)?.into_iter().map(|(q, _)| Ok(json!([q, invariant_value(v, &b.kind, q)?]))).collect::<Result<Vec<_>>>()?;
            Ok(same(Value::Array(got)))
        }
        "b_prime" | "bkg" => {
            let got = descending(p)?.into_iter().map(|k| Ok(json!([k, invariant_value(v, &b.kind, k)?]))).collect::<Result<Vec<_>>>()?;
            Ok(same(Value::Array(got)))
        }
        "qb" => {
            let q = int(p, "q")?;
            let t = row_table(&v.fk, None, v.default_contract(), v.flags.nash_faithful)?;
            let got = descending(p)?.into_iter().map(|i| Ok(json!([i, t.qb_value(q, i)?]))).collect::<Result<Vec<_>>>()?;
            Ok(same(Value::Array(got)))
        }
        "smith_exact" => {
            let got = match smith_first_failure(v)? {
                None => json!(true),
                Some((a, q)) => json!({"exact": false, "alpha": a, "degree": q}),
            };
            Ok(same(got))
        }
        "smith_decompose" => {
            let (k, c) = v.chain(text(p, "chain")?)?;
            let d = smith_decompose(v, &c, int(p, "alpha")?, k)?;
            let cx = v.complex();
            let got = json!({"restriction": cx.describe(k, &d.restriction), "c_prime": cx.describe(k, &d.c_prime)});
            let exp = json!({
                "restriction": chain_text(v, k, want["restriction"].as_str().unwrap_or("")),
                "c_prime": chain_text(v, k, want["c_prime"].as_str().unwrap_or("")),
            });
            Ok((got == exp, format!("got {got}")))
        }
        "quotient_iso" => {
            let q = quotient_comparison(v)?;
            Ok((json!(q.iso) == *want, format!("{q:?}")))
        }
        "hat_e1_check" => {
            let mut bad = Vec::new();
            for k in descending(p)? {
                bad.extend(hat_e1_check(v, k)?.into_iter().map(|m| (k, m)));
            }
            Ok((json!(bad.is_empty()) == *want, format!("{} mismatching cells {:?}", bad.len(), bad.first())))
        }
        "hat_chi" => Ok(same(json!(build_hat_c(int(p, "k")?, &v.fk, None)?.euler_characteristic()))),
        "invariant_betti_relation" => {
            let rels = (int(p, "qmin")?..=int(p, "qmax")?).map(|q| invariant_betti_relation(v, q, contract)).collect::<Result<Vec<_>>>()?;
            let bad: Vec<_> = rels.iter().filter(|r| !r.equal).collect();
            Ok((json!(bad.is_empty()) == *want, format!("failing {bad:?}")))
        }
        "fixed_point_homology_relation" => {
            let l = LComplex::new(v.complex(), None, contract)?;
            let rels = descending(p)?.into_iter().map(|k| fixed_point_homology_relation(v, k, &l)).collect::<Result<Vec<_>>>()?;
            let bad: Vec<_> = rels.iter().filter(|r| !r.equal).collect();
            Ok((json!(bad.is_empty()) == *want, format!("failing {bad:?}")))
        }
        "top_row" => Ok(same(json!(top_row_check(&v.fk, v.dimension(), contract, None)?))),
        "b_prime_cases" => {
            let checks = b_prime_case_checks(v)?;
            let bad: Vec<_> = checks.iter().filter(|c| !c.holds).collect();
            Ok((json!(bad.is_empty()) == *want, format!("{} cases, failing {bad:?}", checks.len())))
        }
        "odd_collapse" => {
            let ok = odd_order_collapse_holds(&v.fk)? && odd_order_homology_collapse(v)?;
            Ok(same(json!(ok)))
        }
        "additivity" => {
            let kind = text(p, "kind")?;
            let load = |stem: &str| corpus::corpus_entry(stem).map(|e| e.model);
            let whole = load(text(p, "whole")?)?;
            let parts = p["parts"].as_array().ok_or_else(|| Error::Parse("`parts` must list entries".into()))?;
            let parts = parts.iter().map(|s| load(s.as_str().unwrap_or(""))).collect::<Result<Vec<_>>>()?;
            let mut bad = Vec::new();
            for k in descending(p)? {
                let w = invariant_value(&whole, kind, k)?;
                let s = parts.iter().map(|m| invariant_value(m, kind, k)).sum::<Result<i64>>()?;
                if w != s {
                    bad.push((k, w, s));
                }
            }
            Ok((json!(bad.is_empty()) == *want, format!("(k, whole, sum of parts) mismatches {bad:?}")))
        }
        other => Err(Error::Parse(format!("unknown expected-block kind `{other}`"))),
    }
}

/// `dim H_k(X;G) = dim H_k(X)^G` over the model's degrees, for odd-order groups.
pub fn odd_order_homology_collapse(v: &VarietyModel) -> Result<bool> {
    let c = v.complex();
    if c.group.order().is_multiple_of(2) {
        return Err(Error::Unsupported("collapse needs odd order".into()));
    }
    let l = LComplex::new(c, None, v.default_contract())?;
    let (lo, _) = v.default_contract().guaranteed_range();
    for k in lo..=c.q_max().max(0) + 1 {
        let inv = if c.chain.degrees().contains(&k) { invariants(&c.group, &homology(c, k).module).dim() } else { 0 };
        if l.homology_dim(k)? != inv {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn verify_entry(stem: &str, file: &ModelFile, loaded: &Result<CorpusEntry>) -> Vec<BlockResult> {
    file.expected
        .iter()
        .map(|b| {
            let (pass, detail) = match (b.kind.as_str(), loaded) {
                ("load_error", Err(e)) => {
                    let msg = e.to_string();
                    let want = b.values.as_str().unwrap_or("");
                    (msg.contains(want), msg)
                }
                ("load_error", Ok(_)) => (false, "model loaded".into()),
                (_, Err(e)) => (false, format!("load failed: {e}")),
                (_, Ok(entry)) => evaluate(&entry.model, b).unwrap_or_else(|e| (false, format!("error: {e}"))),
            };
            BlockResult { entry: stem.to_string(), block: b.name.clone(), tag: b.tag, kind: b.kind.clone(), pass, detail }
        })
        .collect()
}

/// Every expected block of the embedded corpus, ordered by entry name.
pub fn verify_corpus() -> Vec<BlockResult> {
    let mut out = Vec::new();
    for (stem, loaded) in corpus::corpus() {
        if let Some(file) = corpus::corpus_file(&stem) {
            out.extend(verify_entry(&stem, &file, &loaded));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_run_downward() {
        assert_eq!(descending(&json!({"kmin": -1, "kmax": 1})).unwrap(), [1, 0, -1]);
        assert!(descending(&json!({"kmin": 0})).is_err());
    }

    #[test]
    fn value_lists_parse() {
        assert_eq!(pairs(&json!([[0, 1], [-1, 2]])).unwrap(), [(0, 1), (-1, 2)]);
        assert!(triples(&json!([[0, 1]])).is_err());
    }

    #[test]
    fn unknown_kinds_fail_the_block() {
        let text = corpus::CORPUS.iter().find(|(n, _)| *n == "point_trivial").unwrap().1;
        let mut file: ModelFile = serde_json::from_str(text).unwrap();
        file.expected[0].kind = "no_such_kind".into();
        let loaded = corpus::parse_str(&serde_json::to_string(&file).unwrap());
        let r = verify_entry("point_trivial", &file, &loaded);
        assert!(!r[0].pass);
    }
}
