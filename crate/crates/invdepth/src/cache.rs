//! On-disk cache of computed invariant bases. Keys are syntactic: the
//! prime, the dimension, a hash of the generator list as given, the degree
//! bound, and a format-version tag. Writes are atomic
//! (write-temp-then-rename), corrupt or stale entries are treated as misses.

use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::invariants::InvariantBasis;
use crate::linalg::MatFp;

pub const CACHE_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheKey {
    pub p: u32,
    pub n: usize,
    pub generator_hash: String,
    pub degree: u32,
    pub version: u32,
}

impl CacheKey {
    pub fn new(p: u32, n: usize, generators: &[MatFp], degree: u32) -> CacheKey {
        let mut h = Sha256::new();
        h.update(p.to_le_bytes());
        h.update((n as u64).to_le_bytes());
        for g in generators {
            for i in 0..n {
                for j in 0..n {
                    h.update(g.get(i, j).to_le_bytes());
                }
            }
        }
        let generator_hash = hex(&h.finalize());
        CacheKey {
            p,
            n,
            generator_hash,
            degree,
            version: CACHE_FORMAT_VERSION,
        }
    }

    fn file_name(&self) -> String {
        format!(
            "inv-v{}-p{}-n{}-d{}-{}.json",
            self.version, self.p, self.n, self.degree, &self.generator_hash[..32]
        )
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn cache_path(dir: &Path, key: &CacheKey) -> PathBuf {
    dir.join(key.file_name())
}

pub fn cache_store(dir: &Path, key: &CacheKey, basis: &InvariantBasis) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let body = serde_json::to_vec(basis).map_err(|e| Error::Input(format!("serialize: {e}")))?;
    let path = cache_path(dir, key);
    let tmp = path.with_extension("json.tmp");
    std::fs::write(&tmp, &body)?;
    std::fs::rename(&tmp, &path)?;
    Ok(())
}

/// Load a cached basis; any miss, version mismatch, or corruption returns
/// None (corruption additionally warns on stderr).
pub fn cache_load(dir: &Path, key: &CacheKey) -> Option<InvariantBasis> {
    let path = cache_path(dir, key);
    let body = std::fs::read(&path).ok()?;
    match serde_json::from_slice::<InvariantBasis>(&body) {
        Ok(b) if b.p == key.p && b.n == key.n && b.max_degree() == key.degree => Some(b),
        Ok(_) => {
            eprintln!("warning: cache entry {} does not match its key; ignoring", path.display());
            None
        }
        Err(e) => {
            eprintln!("warning: corrupt cache entry {} ({e}); recomputing", path.display());
            None
        }
    }
}
