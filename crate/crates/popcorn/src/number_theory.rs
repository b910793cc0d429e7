//! Integer kernels: gcd, Euler's totient (single values and a linear sieve),
//! coprime residue enumeration and the totient growth ratio.

use crate::error::{Error, Result};

/// Memory budget for [`TotientTable::build`], in table entries.
pub const MAX_SIEVE_LIMIT: u64 = 1 << 27;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// phi(n) = #{ m : 1 <= m < n, gcd(m, n) = 1 }, for n >= 2, via the
/// multiplicative formula over the prime factorization.
pub fn totient(n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::Domain(format!("totient requires n >= 2, got {n}")));
    }
    let mut m = n;
    let mut result = n;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            result -= result / p;
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1 + (p & 1);
    }
    if m > 1 {
        result -= result / m;
    }
    Ok(result)
}

/// All m in [1, q) with gcd(m, q) = 1, ascending.
pub fn coprime_residues(q: u64) -> Vec<u64> {
    debug_assert!(q >= 2);
    (1..q).filter(|&m| gcd(m, q) == 1).collect()
}

/// phi(n) * log(log n) / n, with natural logarithms; defined for n >= 3 so
/// that the inner logarithm is positive.
pub fn totient_growth_ratio(n: u64) -> Result<f64> {
    if n < 3 {
        return Err(Error::Domain(format!("growth ratio requires n >= 3, got {n}")));
    }
    Ok(growth_ratio_value(totient(n)?, n))
}

fn growth_ratio_value(phi: u64, n: u64) -> f64 {
    phi as f64 * (n as f64).ln().ln() / n as f64
}

/// phi(n) for every 2 <= n <= limit, built by a linear sieve.
pub struct TotientTable {
    limit: u64,
    values: Vec<u32>,
}

impl TotientTable {
    pub fn build(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::Domain(format!("sieve limit must be >= 2, got {limit}")));
        }
        if limit > MAX_SIEVE_LIMIT {
            return Err(Error::Resource(format!(
                "sieve limit {limit} exceeds the budget of {MAX_SIEVE_LIMIT} entries"
            )));
        }
        let n = limit as usize;
        let mut phi = vec![0u32; n + 1];
        let mut composite = vec![false; n + 1];
        let mut primes: Vec<usize> = Vec::new();
        phi[1] = 1;
        for i in 2..=n {
            if !composite[i] {
                primes.push(i);
                phi[i] = (i - 1) as u32;
            }
            for &p in &primes {
                let ip = i * p;
                if ip > n {
                    break;
                }
                composite[ip] = true;
                if i % p == 0 {
                    phi[ip] = phi[i] * p as u32;
                    break;
                }
                phi[ip] = phi[i] * (p - 1) as u32;
            }
        }
        Ok(Self { limit, values: phi })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Table lookup; panics outside [2, limit].
    pub fn phi(&self, n: u64) -> u64 {
        assert!((2..=self.limit).contains(&n), "n={n} outside table range");
        self.values[n as usize] as u64
    }

    pub fn growth_ratio(&self, n: u64) -> f64 {
        assert!(n >= 3, "growth ratio requires n >= 3");
        growth_ratio_value(self.phi(n), n)
    }

    /// Minimum of the growth ratio over 3..=limit, with its argmin.
    pub fn min_growth_ratio(&self) -> (u64, f64) {
        let mut best = (3u64, self.growth_ratio(3));
        for n in 4..=self.limit {
            let r = growth_ratio_value(self.values[n as usize] as u64, n);
            if r < best.1 {
                best = (n, r);
            }
        }
        best
    }
}

/// Smallest-prime-factor table; enumerates coprime residues by marking
/// multiples instead of running a gcd per candidate.
pub(crate) struct ResidueSieve {
    spf: Vec<u32>,
}

impl ResidueSieve {
    pub(crate) fn new(limit: u64) -> Self {
        let n = limit.max(2) as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes: Vec<usize> = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i);
            }
            for &p in &primes {
                if p > spf[i] as usize || i * p > n {
                    break;
                }
                spf[i * p] = p as u32;
            }
        }
        Self { spf }
    }

    /// Writes all m in [1, q) coprime to q into `out`, ascending. `mark` is a
    /// reusable scratch buffer.
    pub(crate) fn coprime_residues_into(&self, q: u64, mark: &mut Vec<bool>, out: &mut Vec<u64>) {
        let qu = q as usize;
        out.clear();
        mark.clear();
        mark.resize(qu, false);
        let mut rem = qu;
        while rem > 1 {
            let p = self.spf[rem] as usize;
            let mut x = p;
            while x < qu {
                mark[x] = true;
                x += p;
            }
            while rem % p == 0 {
                rem /= p;
            }
        }
        for m in 1..qu {
            if !mark[m] {
                out.push(m as u64);
            }
        }
    }
}
