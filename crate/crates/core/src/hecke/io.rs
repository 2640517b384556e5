use serde::{Deserialize, Serialize};
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::numkernel::{is_prime, primes_up_to};
use crate::serial::{fmt17, write_json, CsvTable};

use super::family::{Eigenform, FamilySnapshot, Provenance};
use super::modsym::genus_x0;

pub const META_FILE: &str = "meta.json";
pub const COEFF_FILE: &str = "coeffs.csv";
const COEFF_HEADER: [&str; 3] = ["form_id", "n", "a_n"];

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Meta {
    q: u64,
    g: usize,
    nmax: usize,
    fricke_signs: Vec<i8>,
    weights: Vec<f64>,
    #[serde(default = "imported")]
    provenance: Provenance,
}

fn imported() -> Provenance {
    Provenance::Imported
}

/// Cache directory of level `q` under `root`.
pub fn level_dir(root: &Path, q: u64) -> PathBuf {
    root.join(q.to_string())
}

/// Write `meta.json` and `coeffs.csv` into `dir` (created if needed).
pub fn export_family(snapshot: &FamilySnapshot, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let meta = Meta {
        q: snapshot.q,
        g: snapshot.forms.len(),
        nmax: snapshot.nmax,
        fricke_signs: snapshot.fricke_signs(),
        weights: snapshot.weights(),
        provenance: snapshot.provenance,
    };
    write_json(&dir.join(META_FILE), &meta)?;
    let mut csv = CsvTable::new(&COEFF_HEADER);
    for (i, f) in snapshot.forms.iter().enumerate() {
        for n in 1..=snapshot.nmax {
            csv.push(vec![i.to_string(), n.to_string(), fmt17(f.coeffs[n])]);
        }
    }
    csv.write(&dir.join(COEFF_FILE))
}

fn bad(loc: impl Into<String>, msg: impl Into<String>) -> Error {
    Error::validation(loc, msg)
}

/// Read and validate a level directory written by [`export_family`] or by
/// an external tool using the same layout.
pub fn import_family(dir: &Path) -> Result<FamilySnapshot> {
    let meta_path = dir.join(META_FILE);
    let text = fs::read_to_string(&meta_path).map_err(|e| bad(META_FILE, e.to_string()))?;
    let meta: Meta = serde_json::from_str(&text)
        .map_err(|e| bad(format!("{META_FILE}:line {}", e.line()), e.to_string()))?;
    let q = meta.q;
    if !is_prime(q) {
        return Err(bad(
            format!("{META_FILE}:q"),
            format!("level {q} is not prime"),
        ));
    }
    if q < 11 {
        return Err(bad(
            format!("{META_FILE}:q"),
            format!("level {q} has no cusp forms"),
        ));
    }
    if meta.g != genus_x0(q) {
        return Err(bad(
            format!("{META_FILE}:g"),
            format!("g = {} but dim S_2(Gamma_0({q})) = {}", meta.g, genus_x0(q)),
        ));
    }
    if meta.fricke_signs.len() != meta.g {
        return Err(bad(
            format!("{META_FILE}:fricke_signs"),
            "length differs from g",
        ));
    }
    if let Some(s) = meta.fricke_signs.iter().find(|s| s.abs() != 1) {
        return Err(bad(
            format!("{META_FILE}:fricke_signs"),
            format!("sign {s} is not +-1"),
        ));
    }
    if meta.weights.len() != meta.g {
        return Err(bad(format!("{META_FILE}:weights"), "length differs from g"));
    }
    if meta.weights.iter().any(|w| !(*w > 0.0)) {
        return Err(bad(
            format!("{META_FILE}:weights"),
            "weights must be positive",
        ));
    }
    let wsum: f64 = meta.weights.iter().sum();
    if (wsum - 1.0).abs() > 1e-12 {
        return Err(bad(
            format!("{META_FILE}:weights"),
            format!("weights sum to {wsum}"),
        ));
    }
    if meta.nmax == 0 {
        return Err(bad(format!("{META_FILE}:nmax"), "nmax must be positive"));
    }

    let csv = fs::read_to_string(dir.join(COEFF_FILE)).map_err(|e| bad(COEFF_FILE, e.to_string()))?;
    let mut lines = csv.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == COEFF_HEADER.join(",") => {}
        _ => {
            return Err(bad(
                format!("{COEFF_FILE}:line 1"),
                format!("expected header '{}'", COEFF_HEADER.join(",")),
            ))
        }
    }
    let mut coeffs = vec![vec![0.0; meta.nmax + 1]; meta.g];
    let mut expected = (0usize, 1usize);
    for (i, line) in lines {
        let loc = format!("{COEFF_FILE}:line {}", i + 1);
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(bad(
                loc,
                format!("expected 3 fields, found {}", fields.len()),
            ));
        }
        let id: usize = fields[0]
            .parse()
            .map_err(|_| bad(&loc, format!("bad form_id '{}'", fields[0])))?;
        let n: usize = fields[1]
            .parse()
            .map_err(|_| bad(&loc, format!("bad n '{}'", fields[1])))?;
        let a: f64 = fields[2]
            .parse()
            .map_err(|_| bad(&loc, format!("bad a_n '{}'", fields[2])))?;
        if (id, n) != expected {
            return Err(bad(
                loc,
                format!(
                    "expected row ({}, {}), found ({id}, {n})",
                    expected.0, expected.1
                ),
            ));
        }
        if !a.is_finite() {
            return Err(bad(loc, "a_n is not finite"));
        }
        coeffs[id][n] = a;
        expected = if n == meta.nmax {
            (id + 1, 1)
        } else {
            (id, n + 1)
        };
    }
    if expected != (meta.g, 1) {
        return Err(bad(
            format!("{COEFF_FILE}:end"),
            format!("missing rows from ({}, {})", expected.0, expected.1),
        ));
    }

    let table = primes_up_to(meta.nmax.max(2))?;
    let mut forms = Vec::with_capacity(meta.g);
    for (id, c) in coeffs.into_iter().enumerate() {
        let line = |n: usize| 2 + id * meta.nmax + n - 1;
        let loc = |n: usize| format!("{COEFF_FILE}:line {} (form {id}, n = {n})", line(n));
        if (c[1] - 1.0).abs() > 1e-9 {
            return Err(bad(loc(1), format!("a_1 = {} (expected 1)", c[1])));
        }
        for &p in table.primes_to(meta.nmax as u64) {
            let a = c[p as usize];
            if p == q {
                if (a * a - 1.0).abs() > 1e-6 {
                    return Err(bad(
                        loc(p as usize),
                        format!("a_q = {a} but a_q^2 must be 1"),
                    ));
                }
                if (a + meta.fricke_signs[id] as f64).abs() > 1e-6 {
                    return Err(bad(loc(p as usize), "a_q disagrees with the Fricke sign"));
                }
            } else if a.abs() > 2.0 * (p as f64).sqrt() + 1e-6 {
                return Err(bad(
                    loc(p as usize),
                    format!(
                        "|a_{p}| = {} exceeds the Deligne bound {}",
                        a.abs(),
                        2.0 * (p as f64).sqrt()
                    ),
                ));
            }
        }
        // multiplicativity and prime-power recursion
        for n in 2..=meta.nmax {
            let p = table.spf(n) as usize;
            let mut m = n / p;
            let mut pk = p;
            while m % p == 0 {
                m /= p;
                pk *= p;
            }
            let want = if m > 1 {
                c[pk] * c[m]
            } else if pk == p {
                continue;
            } else if p as u64 == q {
                c[pk / p] * c[p]
            } else {
                c[p] * c[pk / p] - p as f64 * c[pk / p / p]
            };
            if (c[n] - want).abs() > 1e-6 * (1.0 + want.abs()) {
                return Err(bad(
                    loc(n),
                    format!("a_n = {} but the Hecke relations give {want}", c[n]),
                ));
            }
        }
        forms.push(Eigenform {
            q,
            id,
            coeffs: c,
            fricke_sign: meta.fricke_signs[id],
            weight: meta.weights[id],
        });
    }
    Ok(FamilySnapshot {
        q,
        nmax: meta.nmax,
        forms,
        provenance: meta.provenance,
    })
}
