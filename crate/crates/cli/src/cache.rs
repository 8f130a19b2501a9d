//! Content-addressed report cache.
//!
//! An entry is three lines: the format header, the SHA-256 of the body, and
//! the body (a JSON report). Entries with another header are stale and get
//! recomputed; a checksum mismatch recomputes with a warning.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use fewweight::codes::CodeReport;
use sha2::{Digest, Sha256};

const HEADER: &str = "fewweight-cache v1";

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn digest(s: &str) -> String {
    hex(&Sha256::digest(s.as_bytes()))
}

pub struct Cache {
    dir: PathBuf,
}

enum Lookup {
    Hit(CodeReport),
    Miss,
    Stale,
    Corrupt(&'static str),
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Cache {
        Cache { dir: dir.into() }
    }

    pub fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{}.json", digest(&format!("{HEADER}\n{key}"))))
    }

    fn lookup(path: &Path) -> Lookup {
        let Ok(text) = fs::read_to_string(path) else {
            return Lookup::Miss;
        };
        let mut parts = text.splitn(3, '\n');
        let (Some(header), Some(sum), Some(body)) = (parts.next(), parts.next(), parts.next())
        else {
            return Lookup::Corrupt("truncated entry");
        };
        if header != HEADER {
            return Lookup::Stale;
        }
        if sum != digest(body) {
            return Lookup::Corrupt("checksum mismatch");
        }
        match serde_json::from_str(body) {
            Ok(r) => Lookup::Hit(r),
            Err(_) => Lookup::Corrupt("undecodable body"),
        }
    }

    /// The cached report for `key`, or `compute()` stored under it.
    pub fn get_or_compute<E>(
        &self,
        key: &str,
        compute: impl FnOnce() -> Result<CodeReport, E>,
    ) -> Result<CodeReport, E> {
        let path = self.path(key);
        match Self::lookup(&path) {
            Lookup::Hit(r) => {
                eprintln!("cache hit: {}", path.display());
                return Ok(r);
            }
            Lookup::Corrupt(why) => {
                eprintln!("warning: ignoring cache entry {} ({why}); recomputing", path.display());
            }
            Lookup::Stale => eprintln!("cache entry {} has an old format; recomputing", path.display()),
            Lookup::Miss => {}
        }
        let r = compute()?;
        if let Err(e) = self.store(&path, &r) {
            eprintln!("warning: could not write cache entry {}: {e}", path.display());
        }
        Ok(r)
    }

    fn store(&self, path: &Path, r: &CodeReport) -> io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let body = serde_json::to_string(r).map_err(io::Error::other)?;
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, format!("{HEADER}\n{}\n{body}", digest(&body)))?;
        fs::rename(tmp, path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fewweight::catalog::{build, FamilyId, Params};
    use fewweight::codes::CodeKind;
    use fewweight::Ctx;

    fn report() -> CodeReport {
        let fam = build(FamilyId::L32_2, &Params::m(2)).unwrap();
        fam.report(CodeKind::CDf, &Ctx::default()).unwrap()
    }

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let r = report();
        let first = cache.get_or_compute::<()>("k", || Ok(r.clone())).unwrap();
        let again = cache
            .get_or_compute::<()>("k", || panic!("should be cached"))
            .unwrap();
        assert_eq!(first, again);

        let path = cache.path("k");
        let text = fs::read_to_string(&path).unwrap();
        fs::write(&path, text.replace("\"length\":", "\"length\": ")).unwrap();
        let mut recomputed = false;
        let third = cache
            .get_or_compute::<()>("k", || {
                recomputed = true;
                Ok(r.clone())
            })
            .unwrap();
        assert!(recomputed);
        assert_eq!(third, r);

        fs::write(&path, "fewweight-cache v0\nabc\n{}").unwrap();
        let mut recomputed = false;
        cache
            .get_or_compute::<()>("k", || {
                recomputed = true;
                Ok(r.clone())
            })
            .unwrap();
        assert!(recomputed);
    }
}
