#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, OnceLock};

use lfamily::hecke::{compute_family, export_family, import_family, level_dir, FamilySnapshot};

/// Families shared by the tests of one binary and cached on disk across
/// binaries and runs (the larger levels take tens of seconds).
pub fn family(q: u64, nmax: usize) -> Arc<FamilySnapshot> {
    static MEM: OnceLock<Mutex<HashMap<u64, Arc<FamilySnapshot>>>> = OnceLock::new();
    let mut mem = MEM.get_or_init(Default::default).lock().unwrap_or_else(|e| e.into_inner());
    if let Some(s) = mem.get(&q) {
        if s.nmax >= nmax {
            return Arc::new(s.truncated(nmax));
        }
    }
    let root = cache_root();
    let dir = level_dir(&root, q);
    let snap = match import_family(&dir) {
        Ok(s) if s.nmax >= nmax => s,
        _ => {
            let s = compute_family(q, nmax).expect("family computation");
            // write beside, then swap in, so a crashed run never leaves half a cache
            let tmp = root.join(format!("{q}.tmp{}", std::process::id()));
            std::fs::create_dir_all(&tmp).unwrap();
            export_family(&s, &tmp).unwrap();
            let _ = std::fs::remove_dir_all(&dir);
            std::fs::rename(&tmp, &dir).unwrap();
            s
        }
    };
    let snap = Arc::new(snap);
    mem.insert(q, snap.clone());
    Arc::new(snap.truncated(nmax))
}

pub fn cache_root() -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("families");
    std::fs::create_dir_all(&p).unwrap();
    p
}

/// Number of affine points of y^2 + y = x^3 - x^2 - 10x - 20 over F_p,
/// by brute force (p odd; p = 2 handled the same way).
pub fn count_11a(p: i64) -> i64 {
    let mut n = 0;
    for x in 0..p {
        let rhs = (x * x % p * x - x * x - 10 * x - 20).rem_euclid(p);
        for y in 0..p {
            if (y * y + y - rhs).rem_euclid(p) == 0 {
                n += 1;
            }
        }
    }
    n
}

/// a_p of the curve 11a via point counting (a_p = p - #affine for good p).
pub fn ap_11a(p: i64) -> i64 {
    p - count_11a(p)
}

pub fn primes_below(n: u64) -> Vec<u64> {
    (2..n).filter(|&k| (2..k).take_while(|d| d * d <= k).all(|d| k % d != 0)).collect()
}

/// Genus of X_0(p) for p prime, from the Hurwitz formula with elliptic
/// points counted by brute force.
pub fn genus_oracle(p: u64) -> usize {
    let sq = |a: i64| (0..p as i64).filter(|x| (x * x - a).rem_euclid(p as i64) == 0).count() as i64;
    // number of solutions of x^2 + 1 = 0 and x^2 + x + 1 = 0 mod p
    let nu2 = sq(-1);
    let nu3 = (0..p as i64).filter(|x| (x * x + x + 1).rem_euclid(p as i64) == 0).count() as i64;
    let mu = p as i64 + 1;
    // 12g = 12 + mu - 3 nu2 - 4 nu3 - 6 cusps
    ((12 + mu - 3 * nu2 - 4 * nu3 - 12) / 12) as usize
}
