use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest supported sieve limit.
pub const MAX_LIMIT: u64 = u32::MAX as u64 - 1;

/// Möbius values and Mertens prefix sums on `1..=limit`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuTable {
    mu: Vec<i8>,
    mertens: Vec<i64>,
}

impl MuTable {
    /// Builds a table from raw `mu[1..=limit]` and `mertens[1..=limit]`, checking consistency.
    pub fn from_parts(mu: Vec<i8>, mertens: Vec<i64>) -> Result<Self> {
        if mu.is_empty() || mu.len() != mertens.len() {
            return Err(Error::InvalidArgument("mu and mertens lengths differ or are empty".into()));
        }
        let mut acc = 0i64;
        for (i, (&u, &m)) in mu.iter().zip(&mertens).enumerate() {
            if !(-1..=1).contains(&u) {
                return Err(Error::InvalidArgument(format!("mu[{}] = {} out of range", i + 1, u)));
            }
            acc += u as i64;
            if acc != m {
                return Err(Error::InvalidArgument(format!("mertens[{}] inconsistent with mu", i + 1)));
            }
        }
        if mu[0] != 1 {
            return Err(Error::InvalidArgument("mu[1] must be 1".into()));
        }
        let mut m = Vec::with_capacity(mu.len() + 1);
        m.push(0);
        m.extend_from_slice(&mu);
        let mut mm = Vec::with_capacity(mertens.len() + 1);
        mm.push(0);
        mm.extend_from_slice(&mertens);
        Ok(Self { mu: m, mertens: mm })
    }

    pub fn limit(&self) -> u64 {
        (self.mu.len() - 1) as u64
    }

    /// μ(n); n = 0 gives 0.
    #[inline]
    pub fn mu(&self, n: u64) -> i8 {
        self.mu[n as usize]
    }

    /// M(n); M(0) = 0.
    #[inline]
    pub fn mertens(&self, n: u64) -> i64 {
        self.mertens[n as usize]
    }

    /// μ values indexed from 0 (index 0 holds 0).
    pub fn mu_values(&self) -> &[i8] {
        &self.mu
    }

    /// Mertens values indexed from 0 (index 0 holds 0).
    pub fn mertens_values(&self) -> &[i64] {
        &self.mertens
    }

    /// Copy restricted to `1..=limit`.
    pub fn truncated(&self, limit: u64) -> Result<Self> {
        if limit == 0 || limit > self.limit() {
            return Err(Error::Range(format!("cannot truncate table of limit {} to {}", self.limit(), limit)));
        }
        let n = limit as usize + 1;
        Ok(Self { mu: self.mu[..n].to_vec(), mertens: self.mertens[..n].to_vec() })
    }
}

/// Sieve configuration.
#[derive(Debug, Clone, Copy)]
pub struct SieveOptions {
    pub block_size: usize,
    /// Worker count; `None` uses the global rayon pool.
    pub jobs: Option<usize>,
}

impl Default for SieveOptions {
    fn default() -> Self {
        Self { block_size: 1 << 18, jobs: None }
    }
}

pub fn sieve_mu(limit: u64) -> Result<MuTable> {
    sieve_mu_with(limit, &SieveOptions::default())
}

pub fn sieve_mu_with(limit: u64, opts: &SieveOptions) -> Result<MuTable> {
    if limit == 0 {
        return Err(Error::InvalidArgument("sieve limit must be at least 1".into()));
    }
    if limit > MAX_LIMIT {
        return Err(Error::InvalidArgument(format!("sieve limit {} exceeds {}", limit, MAX_LIMIT)));
    }
    if opts.block_size == 0 {
        return Err(Error::InvalidArgument("block size must be positive".into()));
    }
    let primes = small_primes(isqrt(limit));
    let mut mu = vec![0i8; limit as usize + 1];
    let block = opts.block_size;
    let run = |mu: &mut Vec<i8>| {
        mu.par_chunks_mut(block).enumerate().for_each(|(b, chunk)| sieve_block((b * block) as u64, chunk, &primes));
    };
    match opts.jobs {
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j.max(1))
                .build()
                .map_err(|e| Error::Resource(e.to_string()))?;
            pool.install(|| run(&mut mu));
        }
        None => run(&mut mu),
    }
    mu[0] = 0;
    let mut mertens = vec![0i64; mu.len()];
    let mut acc = 0i64;
    for (n, &u) in mu.iter().enumerate().skip(1) {
        acc += u as i64;
        mertens[n] = acc;
    }
    Ok(MuTable { mu, mertens })
}

fn sieve_block(lo: u64, chunk: &mut [i8], primes: &[u32]) {
    let hi = lo + chunk.len() as u64;
    let mut prod = vec![1u32; chunk.len()];
    chunk.fill(1);
    for &p in primes {
        let p = p as u64;
        let mut k = lo.div_ceil(p).max(1) * p;
        while k < hi {
            let i = (k - lo) as usize;
            chunk[i] = -chunk[i];
            prod[i] *= p as u32;
            k += p;
        }
        let pp = p * p;
        let mut k = lo.div_ceil(pp).max(1) * pp;
        while k < hi {
            chunk[(k - lo) as usize] = 0;
            k += pp;
        }
    }
    for (i, v) in chunk.iter_mut().enumerate() {
        let n = lo + i as u64;
        if n == 0 {
            *v = 0;
        } else if *v != 0 && prod[i] as u64 != n {
            *v = -*v;
        }
    }
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn small_primes(n: u64) -> Vec<u32> {
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Σ_{n=1}^{T−1} |M(n)|, which equals ∫₁^T |M(t)| dt.
pub fn abs_mertens_prefix_integral(table: &MuTable, t: u64) -> Result<u64> {
    if t < 2 || t > table.limit() {
        return Err(Error::Range(format!("T = {} outside [2, {}]", t, table.limit())));
    }
    Ok((1..t).map(|n| table.mertens(n).unsigned_abs()).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isqrt_exact() {
        for n in [0u64, 1, 3, 4, 15, 16, 17, 99, 100, 101, u32::MAX as u64] {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
        }
    }

    #[test]
    fn first_values() {
        let t = sieve_mu(30).unwrap();
        let expect =
            [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0, -1, 1, 1, 0, -1, 0, -1, 0, 1, 1, -1, 0, 0, 1, 0, 0, -1, -1];
        for (i, &e) in expect.iter().enumerate() {
            assert_eq!(t.mu(i as u64 + 1), e, "mu({})", i + 1);
        }
    }

    #[test]
    fn tiny_blocks_match() {
        let a = sieve_mu_with(5000, &SieveOptions { block_size: 7, jobs: Some(3) }).unwrap();
        let b = sieve_mu(5000).unwrap();
        assert_eq!(a, b);
    }
}
