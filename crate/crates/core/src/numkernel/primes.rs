use crate::error::{Error, Result};

/// Primes up to `bound` together with a smallest-prime-factor table.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    bound: usize,
    primes: Vec<u64>,
    spf: Vec<u32>,
}

/// Linear sieve over `1..=bound`.
pub fn primes_up_to(bound: usize) -> Result<PrimeTable> {
    if bound < 2 {
        return Err(Error::invalid(format!(
            "prime bound must be >= 2, got {bound}"
        )));
    }
    if bound > u32::MAX as usize {
        return Err(Error::invalid("prime bound exceeds u32 range"));
    }
    let mut spf = vec![0u32; bound + 1];
    let mut primes = Vec::new();
    for n in 2..=bound {
        if spf[n] == 0 {
            spf[n] = n as u32;
            primes.push(n as u64);
        }
        let sn = spf[n] as u64;
        for &p in &primes {
            let m = p as usize * n;
            if p > sn || m > bound {
                break;
            }
            spf[m] = p as u32;
        }
    }
    Ok(PrimeTable { bound, primes, spf })
}

impl PrimeTable {
    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Primes `p <= limit` (limit clamped to the table bound).
    pub fn primes_to(&self, limit: u64) -> &[u64] {
        let end = self.primes.partition_point(|&p| p <= limit);
        &self.primes[..end]
    }

    /// Smallest prime factor of `n` for `2 <= n <= bound`.
    pub fn spf(&self, n: usize) -> u64 {
        self.spf[n] as u64
    }

    pub fn is_prime(&self, n: usize) -> bool {
        n >= 2 && n <= self.bound && self.spf[n] as usize == n
    }

    pub fn factor(&self, n: u64) -> Result<Vec<(u64, u32)>> {
        factor(n, self)
    }
}

/// Prime factorization with ascending primes.
pub fn factor(n: u64, table: &PrimeTable) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::invalid("cannot factor 0"));
    }
    if n as usize > table.bound {
        return Err(Error::invalid(format!(
            "{n} exceeds prime table bound {}",
            table.bound
        )));
    }
    let mut out: Vec<(u64, u32)> = Vec::new();
    let mut m = n as usize;
    while m > 1 {
        let p = table.spf[m] as u64;
        let mut e = 0;
        while m as u64 % p == 0 {
            m /= p as usize;
            e += 1;
        }
        out.push((p, e));
    }
    Ok(out)
}

/// Divisor function d(n) for `0..=bound` (index 0 unused).
pub fn divisor_counts(bound: usize) -> Vec<u32> {
    let mut d = vec![0u32; bound + 1];
    for a in 1..=bound {
        let mut m = a;
        while m <= bound {
            d[m] += 1;
            m += a;
        }
    }
    d
}
