//! One plain-text line per (k, p): "k,p,rank,d,A_p,fiber_sum".

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::fibers::{a_p_default, bad_primes, surface_data, ApValue};
use crate::arith::primes_up_to;
use crate::error::{Error, Result};

pub const CACHE_ENV: &str = "K3MAHLER_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApCache {
    dir: PathBuf,
}

impl ApCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        ApCache { dir: dir.into() }
    }

    /// $K3MAHLER_CACHE_DIR, else $HOME/.cache/k3mahler, else None.
    pub fn from_env() -> Option<Self> {
        if let Some(d) = std::env::var_os(CACHE_ENV).filter(|d| !d.is_empty()) {
            return Some(ApCache::new(d));
        }
        std::env::var_os("HOME").map(|h| ApCache::new(Path::new(&h).join(".cache").join("k3mahler")))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, k: i64, p: u64) -> PathBuf {
        self.dir.join(format!("ap_k{k}_p{p}.txt"))
    }

    /// The cached value, or `None` when absent or unreadable.
    pub fn load(&self, k: i64, p: u64) -> Option<ApValue> {
        let text = fs::read_to_string(self.path(k, p)).ok()?;
        let v = parse_line(text.trim())?;
        (v.k == k && v.p == p).then_some(v)
    }

    pub fn store(&self, v: &ApValue) -> Result<()> {
        fs::create_dir_all(&self.dir).map_err(|e| Error::Cache(format!("{}: {e}", self.dir.display())))?;
        let line = format!("{},{},{},{},{},{}\n", v.k, v.p, v.rank, v.d, v.a_p, v.fiber_sum);
        // Write then rename so a reader never sees a partial line.
        let path = self.path(v.k, v.p);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, line).map_err(|e| Error::Cache(format!("{}: {e}", tmp.display())))?;
        fs::rename(&tmp, &path).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))
    }
}

fn parse_line(s: &str) -> Option<ApValue> {
    let f: Vec<&str> = s.split(',').collect();
    let [k, p, rank, d, a, sum] = f.as_slice() else { return None };
    Some(ApValue {
        k: k.parse().ok()?,
        p: p.parse().ok()?,
        rank: rank.parse().ok()?,
        d: d.parse().ok()?,
        a_p: a.parse().ok()?,
        fiber_sum: sum.parse().ok()?,
    })
}

/// A_p for Y_k, read from the cache when present and stored after computing.
pub fn a_p_cached(k: i64, p: u64, cache: Option<&ApCache>) -> Result<ApValue> {
    if let Some(v) = cache.and_then(|c| c.load(k, p)) {
        return Ok(v);
    }
    let v = a_p_default(k, p)?;
    if let Some(c) = cache {
        c.store(&v)?;
    }
    Ok(v)
}

/// A_p for every good prime p ≤ pmax, in increasing p.
pub fn a_p_range(k: i64, pmax: u64, cache: Option<&ApCache>) -> Result<Vec<ApValue>> {
    let excluded = bad_primes(surface_data(k)?.level);
    let ps: Vec<u64> = primes_up_to(pmax).into_iter().filter(|p| !excluded.contains(p)).collect();
    ps.par_iter().map(|&p| a_p_cached(k, p, cache)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let c = ApCache::new(dir.path());
        let v = a_p_cached(6, 7, Some(&c)).unwrap();
        assert_eq!(c.load(6, 7), Some(v));
        fs::write(c.path(6, 7), "garbage").unwrap();
        assert_eq!(c.load(6, 7), None);
        assert_eq!(a_p_cached(6, 7, Some(&c)).unwrap(), v);
        assert_eq!(c.load(6, 7), Some(v));
    }

    #[test]
    fn range_skips_bad_primes() {
        let ps: Vec<u64> = a_p_range(18, 31, None).unwrap().iter().map(|v| v.p).collect();
        assert_eq!(ps, vec![7, 11, 13, 17, 19, 23, 29, 31]);
    }
}
