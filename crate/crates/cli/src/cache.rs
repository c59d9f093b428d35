//! On-disk cache of kernel bases.
//!
//! ```text
//! format: w2p-kernel/1
//! p: 2
//! operator: Qtilde
//! level: 6
//! revision: 0.1.0
//! vectors: 3
//!
//! 1 b(-6)^1@0 ; ...
//! ```
//!
//! A header that disagrees with the request is stale and never reused; a
//! file that fails to parse is reported and recomputed.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use w2p_core::fock::{FockVector, ModelParams};
use w2p_core::walgebra::{kernel, KernelBasis, ScreeningOp};
use w2p_core::Result;

pub const FORMAT: &str = "w2p-kernel/1";
pub const REVISION: &str = env!("CARGO_PKG_VERSION");

pub const CACHE_ENV: &str = "W2P_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Header {
    pub format: String,
    pub p: u32,
    pub operator: ScreeningOp,
    pub level: u32,
    pub revision: String,
    pub vectors: usize,
}

#[derive(Debug, PartialEq, Eq)]
pub enum Lookup {
    Hit(KernelBasis),
    Miss,
    Stale,
    Corrupt(String),
}

#[derive(Clone, Debug)]
pub struct KernelCache {
    dir: PathBuf,
    revision: String,
}

impl KernelCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self::with_revision(dir, REVISION)
    }

    pub fn with_revision(dir: impl Into<PathBuf>, revision: &str) -> Self {
        Self {
            dir: dir.into(),
            revision: revision.to_string(),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, p: u32, op: ScreeningOp, level: u32) -> PathBuf {
        self.dir.join(format!("kernel-p{p}-{}-{level}.txt", op.tag()))
    }

    pub fn store(&self, params: &ModelParams, basis: &KernelBasis) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path(params.p(), basis.op, basis.level);
        let tmp = path.with_extension("tmp");
        let mut f = fs::File::create(&tmp)?;
        f.write_all(render(params.p(), basis, &self.revision).as_bytes())?;
        f.sync_all()?;
        fs::rename(tmp, path)
    }

    pub fn load(&self, params: &ModelParams, op: ScreeningOp, level: u32) -> Lookup {
        let path = self.path(params.p(), op, level);
        let Ok(text) = fs::read_to_string(&path) else {
            return Lookup::Miss;
        };
        match parse(params, &text) {
            Err(e) => Lookup::Corrupt(e),
            Ok((h, vectors)) => {
                let fresh = h.format == FORMAT
                    && h.p == params.p()
                    && h.operator == op
                    && h.level == level
                    && h.revision == self.revision;
                if !fresh {
                    Lookup::Stale
                } else {
                    Lookup::Hit(KernelBasis { op, level, vectors })
                }
            }
        }
    }

    /// Cached kernel, recomputed and rewritten on a miss. Warnings go to
    /// `warn`; a failed write is a warning, not an error.
    pub fn kernel(
        &self,
        params: &ModelParams,
        op: ScreeningOp,
        level: u32,
        warn: &mut dyn FnMut(String),
    ) -> Result<KernelBasis> {
        match self.load(params, op, level) {
            Lookup::Hit(basis) => return Ok(basis),
            Lookup::Miss | Lookup::Stale => {}
            Lookup::Corrupt(why) => warn(format!(
                "warning: ignoring corrupt cache file {}: {why}",
                self.path(params.p(), op, level).display()
            )),
        }
        let basis = kernel(params, op, level)?;
        if let Err(e) = self.store(params, &basis) {
            warn(format!("warning: could not write cache in {}: {e}", self.dir.display()));
        }
        Ok(basis)
    }
}

pub fn render(p: u32, basis: &KernelBasis, revision: &str) -> String {
    let mut out = format!(
        "format: {FORMAT}\np: {p}\noperator: {}\nlevel: {}\nrevision: {revision}\nvectors: {}\n\n",
        basis.op.tag(),
        basis.level,
        basis.vectors.len()
    );
    for v in &basis.vectors {
        out.push_str(&v.to_string());
        out.push('\n');
    }
    out
}

pub fn parse(params: &ModelParams, text: &str) -> std::result::Result<(Header, Vec<FockVector>), String> {
    let (head, body) = text.split_once("\n\n").ok_or("missing blank line after header")?;
    let mut fields = std::collections::BTreeMap::new();
    for line in head.lines() {
        let (k, v) = line.split_once(": ").ok_or_else(|| format!("bad header line `{line}`"))?;
        if fields.insert(k, v).is_some() {
            return Err(format!("repeated header key `{k}`"));
        }
    }
    let get = |k: &str| fields.get(k).copied().ok_or_else(|| format!("missing header key `{k}`"));
    let num = |k: &str| -> std::result::Result<u64, String> {
        get(k)?.parse().map_err(|_| format!("header `{k}` is not a number"))
    };
    let header = Header {
        format: get("format")?.to_string(),
        p: num("p")? as u32,
        operator: ScreeningOp::from_tag(get("operator")?).ok_or("unknown operator tag")?,
        level: num("level")? as u32,
        revision: get("revision")?.to_string(),
        vectors: num("vectors")? as usize,
    };
    if !body.ends_with('\n') && !body.is_empty() {
        return Err("truncated payload".into());
    }
    let vectors = body
        .lines()
        .map(|l| FockVector::parse(params, l).map_err(|e| e.to_string()))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if vectors.len() != header.vectors {
        return Err(format!("expected {} vectors, found {}", header.vectors, vectors.len()));
    }
    for v in &vectors {
        if v.sector() != &params.vacuum_sector() || v.levels().iter().any(|&l| l != header.level) {
            return Err("payload vector outside the charge-zero graded piece".into());
        }
    }
    Ok((header, vectors))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_staleness() {
        let dir = tempfile::tempdir().unwrap();
        let m = ModelParams::new(2).unwrap();
        let cache = KernelCache::new(dir.path());
        let k = kernel(&m, ScreeningOp::QTilde, 6).unwrap();
        assert_eq!(cache.load(&m, ScreeningOp::QTilde, 6), Lookup::Miss);
        cache.store(&m, &k).unwrap();
        assert_eq!(cache.load(&m, ScreeningOp::QTilde, 6), Lookup::Hit(k.clone()));
        let text = fs::read_to_string(cache.path(2, ScreeningOp::QTilde, 6)).unwrap();
        assert_eq!(render(2, &k, REVISION), text);

        let bumped = KernelCache::with_revision(dir.path(), "99.0.0");
        assert_eq!(bumped.load(&m, ScreeningOp::QTilde, 6), Lookup::Stale);

        let path = cache.path(2, ScreeningOp::QTilde, 6);
        fs::write(&path, &text[..text.len() - 7]).unwrap();
        assert!(matches!(cache.load(&m, ScreeningOp::QTilde, 6), Lookup::Corrupt(_)));
        let mut warnings = Vec::new();
        let again = cache
            .kernel(&m, ScreeningOp::QTilde, 6, &mut |w| warnings.push(w))
            .unwrap();
        assert_eq!(again, k);
        assert_eq!(warnings.len(), 1);
        assert_eq!(cache.load(&m, ScreeningOp::QTilde, 6), Lookup::Hit(k));
    }
}
