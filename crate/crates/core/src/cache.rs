//! On-disk lattice cache: one versioned JSON file per group descriptor.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Limits};
use crate::lattice::{generated_subgroup, Lattice};
use crate::perm::Perm;

pub const CACHE_VERSION: u32 = 1;
pub const CACHE_ENV: &str = "COMMGRAPH_CACHE";
pub const DEFAULT_CACHE_DIR: &str = ".commgraph-cache";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CachedSubgroup {
    pub id: String,
    pub order: u64,
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeFile {
    pub version: u32,
    pub descriptor: String,
    pub group_order: u64,
    pub checksum: String,
    pub subgroups: Vec<CachedSubgroup>,
}

fn checksum(subgroups: &[CachedSubgroup]) -> Result<String> {
    let body = serde_json::to_vec(subgroups)?;
    Ok(Sha256::digest(&body).iter().map(|b| format!("{b:02x}")).collect())
}

/// Sanitized descriptor, shortened with a digest when it would make an unwieldy file name.
fn file_stem(group: &FiniteGroup) -> String {
    let name = group.descriptor().sanitized();
    if name.len() <= 96 {
        return name;
    }
    let digest = Sha256::digest(group.descriptor().to_string().as_bytes());
    let tag: String = digest[..6].iter().map(|b| format!("{b:02x}")).collect();
    format!("{}-{tag}", &name[..64])
}

/// `--cache-dir` if given, else `$COMMGRAPH_CACHE`, else `./.commgraph-cache`.
pub fn resolve_cache_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR))
}

#[derive(Clone, Debug)]
pub struct LatticeCache {
    dir: PathBuf,
}

impl LatticeCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, group: &FiniteGroup) -> PathBuf {
        self.dir.join(format!("{}.lattice.json", file_stem(group)))
    }

    /// Writes the lattice through a temporary file and an atomic rename.
    pub fn store(&self, lattice: &Lattice) -> Result<PathBuf> {
        static COUNTER: AtomicU64 = AtomicU64::new(0);
        let subgroups: Vec<CachedSubgroup> = lattice
            .subgroups()
            .iter()
            .map(|s| CachedSubgroup {
                id: s.id().to_string(),
                order: s.order(),
                generators: s.generators().iter().map(Perm::to_cycle_string).collect(),
            })
            .collect();
        let file = LatticeFile {
            version: CACHE_VERSION,
            descriptor: lattice.group().descriptor().to_string(),
            group_order: lattice.group().order(),
            checksum: checksum(&subgroups)?,
            subgroups,
        };
        fs::create_dir_all(&self.dir).map_err(|e| Error::io(&self.dir, e))?;
        let path = self.path_for(lattice.group());
        let tmp = self.dir.join(format!(
            ".{}.{}.{}.tmp",
            file_stem(lattice.group()),
            std::process::id(),
            COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        fs::write(&tmp, serde_json::to_vec(&file)?).map_err(|e| Error::io(&tmp, e))?;
        fs::rename(&tmp, &path).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }

    /// Reads a cached lattice for `group`. `Ok(None)` means "recompute": the
    /// file is absent, from another cache version, or fails its checksum.
    /// Unreadable JSON and a wrong group order are errors naming the file.
    pub fn load(&self, group: &Arc<FiniteGroup>) -> Result<Option<Lattice>> {
        let path = self.path_for(group);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(Error::io(&path, e)),
        };
        let corrupt = |reason: String| Error::CacheCorrupt {
            path: path.clone(),
            reason,
        };
        let file: LatticeFile = serde_json::from_str(&text).map_err(|e| corrupt(e.to_string()))?;
        if file.version != CACHE_VERSION {
            info!(
                "{}: cache version {} differs from {CACHE_VERSION}, recomputing",
                path.display(),
                file.version
            );
            return Ok(None);
        }
        if file.group_order != group.order() || file.descriptor != group.descriptor().to_string() {
            return Err(corrupt(format!(
                "records {} of order {}, expected {} of order {}",
                file.descriptor,
                file.group_order,
                group.descriptor(),
                group.order()
            )));
        }
        if checksum(&file.subgroups)? != file.checksum {
            warn!("{}: checksum mismatch, recomputing", path.display());
            return Ok(None);
        }
        let degree = group.degree();
        let rebuilt = file
            .subgroups
            .par_iter()
            .map(|c| {
                let gens = c
                    .generators
                    .iter()
                    .map(|s| Perm::parse_cycles(s, degree))
                    .collect::<Result<Vec<_>>>()?;
                let s = generated_subgroup(group, &gens)?;
                Ok((s.id() == c.id && s.order() == c.order).then_some(s))
            })
            .collect::<Result<Vec<_>>>();
        let rebuilt = match rebuilt {
            Ok(r) => r,
            Err(e) => return Err(corrupt(e.to_string())),
        };
        if rebuilt.iter().any(Option::is_none) {
            warn!("{}: cached generators disagree with recorded ids, recomputing", path.display());
            return Ok(None);
        }
        Ok(Some(Lattice::from_subgroups(
            group.clone(),
            rebuilt.into_iter().flatten().collect(),
        )))
    }

    /// Cached lattice if valid, otherwise a fresh enumeration that is then stored.
    pub fn lattice(&self, group: Arc<FiniteGroup>, limits: &Limits) -> Result<Lattice> {
        if let Some(l) = self.load(&group)? {
            return Ok(l);
        }
        let lattice = Lattice::enumerate(group, limits)?;
        self.store(&lattice)?;
        Ok(lattice)
    }
}
