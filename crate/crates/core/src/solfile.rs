//! Solution-set serialization.
//!
//! JSON is the interchange format: a `meta` header (dispersion spec, domain,
//! generator version, count) plus one flat `[n1,m1,n2,m2,n3,m3]` row per
//! triad in canonical order. Writing is byte-stable; reading validates
//! structure and constraints so downstream commands can trust the data.
//! CSV is a one-way export with the same row layout.

use serde::Deserialize;

use crate::dispersion::{resonance_identity_holds, BetaTable, DispersionSpec, Triad, WaveVector};
use crate::enumerator::SolutionSet;
use crate::error::Error;

pub fn to_json(set: &SolutionSet) -> String {
    let spec = serde_json::to_string(&set.spec).expect("spec serialization is infallible");
    let mut out = String::new();
    out.push_str("{\n  \"meta\": {\n");
    out.push_str(&format!("    \"dispersion\": {spec},\n"));
    out.push_str(&format!("    \"domain\": {},\n", set.domain));
    out.push_str(&format!(
        "    \"generator_version\": \"{}\",\n",
        env!("CARGO_PKG_VERSION")
    ));
    out.push_str(&format!("    \"count\": {}\n", set.triads.len()));
    out.push_str("  },\n  \"triads\": [");
    for (i, t) in set.triads.iter().enumerate() {
        let sep = if i == 0 { "" } else { "," };
        let [k1, k2, k3] = t.vectors();
        out.push_str(&format!(
            "{sep}\n    [{},{},{},{},{},{}]",
            k1.n, k1.m, k2.n, k2.m, k3.n, k3.m
        ));
    }
    if set.triads.is_empty() {
        out.push_str("]\n}\n");
    } else {
        out.push_str("\n  ]\n}\n");
    }
    out
}

pub fn from_json(text: &str) -> Result<SolutionSet, Error> {
    #[derive(Deserialize)]
    struct Meta {
        dispersion: DispersionSpec,
        domain: u32,
        #[allow(dead_code)]
        generator_version: String,
        count: u64,
    }
    #[derive(Deserialize)]
    struct Doc {
        meta: Meta,
        triads: Vec<[u32; 6]>,
    }

    let doc: Doc = serde_json::from_str(text)?;
    let spec = doc.meta.dispersion;
    let domain = doc.meta.domain;
    if domain < 1 {
        return Err(Error::InvalidSolutionFile("domain must be >= 1".into()));
    }
    if doc.meta.count != doc.triads.len() as u64 {
        return Err(Error::InvalidSolutionFile(format!(
            "meta.count = {} but {} triads present",
            doc.meta.count,
            doc.triads.len()
        )));
    }
    let table = BetaTable::build(&spec, domain)?;
    let mut triads = Vec::with_capacity(doc.triads.len());
    for (row_idx, row) in doc.triads.iter().enumerate() {
        let [n1, m1, n2, m2, n3, m3] = *row;
        let bad = |why: String| {
            Error::InvalidSolutionFile(format!("triad row {row_idx} {row:?}: {why}"))
        };
        for v in row {
            if *v < 1 || *v > domain {
                return Err(bad(format!("component {v} outside [1, {domain}]")));
            }
        }
        if m1 as u64 + m2 as u64 != m3 as u64 {
            return Err(bad("m1 + m2 != m3".into()));
        }
        let (k1, k2, k3) = (
            WaveVector::new(m1, n1),
            WaveVector::new(m2, n2),
            WaveVector::new(m3, n3),
        );
        if k2 < k1 {
            return Err(bad("pair not in canonical (n, m) order".into()));
        }
        if !spec.admissible(k1, k2, k3) {
            return Err(bad("violates the spec's constraints".into()));
        }
        // Any repeated n in a resonant triple forces all three equal
        // (strictly increasing beta), the degenerate self-interaction
        // family the enumerator excludes.
        if n1 == n2 || n1 == n3 || n2 == n3 {
            return Err(bad("repeated n".into()));
        }
        if !resonance_identity_holds(m1, m2, m3, table.get(n1), table.get(n2), table.get(n3)) {
            return Err(bad("resonance identity does not hold".into()));
        }
        let t = Triad::new(k1, k2, k3);
        if let Some(prev) = triads.last() {
            if t <= *prev {
                return Err(bad("rows not in strictly ascending canonical order".into()));
            }
        }
        triads.push(t);
    }
    Ok(SolutionSet {
        spec,
        domain,
        triads,
    })
}

pub fn to_csv(set: &SolutionSet) -> String {
    let mut out = String::from("n1,m1,n2,m2,n3,m3\n");
    for t in &set.triads {
        let [k1, k2, k3] = t.vectors();
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            k1.n, k1.m, k2.n, k2.m, k3.n, k3.m
        ));
    }
    out
}
