//! Catalog files: one JSON document per table, one entry per line, and an
//! index listing the tables in dependency order.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use sdcodes_core::construct::{four_negacirculant, neighbor_type_ii, FourNegaSpec, TransformSpec};
use sdcodes_core::zring::{Modulus, RingVector, StdFormCode};

pub const SCHEMA: &str = "sdcodes-catalog/1";
pub const INDEX_SCHEMA: &str = "sdcodes-catalog-index/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntry {
    pub id: String,
    pub modulus: u32,
    pub length: usize,
    pub construction: ConstructionData,
    pub claims: Claims,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConstructionData {
    FourNegacirculant { r_a: Vec<u32>, r_b: Vec<u32> },
    Transform { base_id: String, x: Vec<u32>, y: Vec<u32> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Claims {
    pub type_ii: bool,
    pub extremal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub binary_part_column: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gleason_a: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogFile {
    pub schema: String,
    pub table: String,
    pub description: String,
    pub entries: Vec<CatalogEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogIndex {
    pub schema: String,
    pub tables: Vec<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{origin}: line {line}, column {column}: {message}")]
    Syntax { origin: String, line: usize, column: usize, message: String },
    #[error("{origin}: unsupported schema {found:?}, expected {expected:?}")]
    Schema { origin: String, found: String, expected: &'static str },
    #[error("entry {id}: {message}")]
    Invalid { id: String, message: String },
    #[error("entry {id}: unknown base {base_id:?}")]
    DanglingBase { id: String, base_id: String },
    #[error("duplicate entry id {0}")]
    Duplicate(String),
    #[error("no entry {0}")]
    Unknown(String),
    #[error("entry {id}: {source}")]
    Construct { id: String, source: sdcodes_core::Error },
}

impl CatalogFile {
    pub fn parse(origin: &str, text: &str) -> Result<Self, CatalogError> {
        let file: CatalogFile = serde_json::from_str(text).map_err(|e| CatalogError::Syntax {
            origin: origin.to_string(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if file.schema != SCHEMA {
            return Err(CatalogError::Schema { origin: origin.to_string(), found: file.schema, expected: SCHEMA });
        }
        Ok(file)
    }

    /// Canonical text: fixed header order and one compact entry per line.
    pub fn to_canonical_string(&self) -> String {
        let q = |s: &str| serde_json::to_string(s).expect("string serializes");
        let mut out = String::from("{\n");
        let _ = writeln!(out, "  \"schema\": {},", q(&self.schema));
        let _ = writeln!(out, "  \"table\": {},", q(&self.table));
        let _ = writeln!(out, "  \"description\": {},", q(&self.description));
        if self.entries.is_empty() {
            out.push_str("  \"entries\": []\n");
        } else {
            out.push_str("  \"entries\": [\n");
            for (i, e) in self.entries.iter().enumerate() {
                let line = serde_json::to_string(e).expect("entry serializes");
                let sep = if i + 1 < self.entries.len() { "," } else { "" };
                let _ = writeln!(out, "    {line}{sep}");
            }
            out.push_str("  ]\n");
        }
        out.push_str("}\n");
        out
    }
}

impl CatalogEntry {
    pub fn k(&self) -> Option<u32> {
        (self.modulus % 2 == 0).then_some(self.modulus / 2)
    }

    /// Shape checks that need no other entry.
    pub fn validate_shape(&self) -> Result<(), CatalogError> {
        let bad = |message: String| Err(CatalogError::Invalid { id: self.id.clone(), message });
        if self.modulus < 2 {
            return bad(format!("modulus {} below 2", self.modulus));
        }
        if self.length == 0 || self.length % 2 != 0 {
            return bad(format!("length {} is not a positive even number", self.length));
        }
        let vectors: Vec<(&str, &Vec<u32>, usize)> = match &self.construction {
            ConstructionData::FourNegacirculant { r_a, r_b } => {
                if self.length % 4 != 0 {
                    return bad(format!("four-negacirculant length {} not divisible by 4", self.length));
                }
                vec![("r_a", r_a, self.length / 4), ("r_b", r_b, self.length / 4)]
            }
            ConstructionData::Transform { x, y, .. } => {
                vec![("x", x, self.length / 2), ("y", y, self.length / 2)]
            }
        };
        for (name, v, want) in vectors {
            if v.len() != want {
                return bad(format!("{name} has {} entries, expected {want}", v.len()));
            }
            if let Some(c) = v.iter().find(|&&c| c >= self.modulus) {
                return bad(format!("{name} entry {c} not reduced mod {}", self.modulus));
            }
        }
        Ok(())
    }
}

/// A loaded, validated catalog with memoized materialization.
#[derive(Debug, Default)]
pub struct Catalog {
    files: Vec<CatalogFile>,
    entries: Vec<CatalogEntry>,
    index: HashMap<String, usize>,
    codes: Mutex<HashMap<String, Arc<StdFormCode>>>,
}

impl Clone for Catalog {
    fn clone(&self) -> Self {
        Self::from_files(self.files.clone()).expect("already validated")
    }
}

impl Catalog {
    /// Validates ids, shapes and base references; a base must precede its
    /// dependents.
    pub fn from_files(files: Vec<CatalogFile>) -> Result<Self, CatalogError> {
        let mut entries = Vec::new();
        let mut index = HashMap::new();
        for f in &files {
            for e in &f.entries {
                e.validate_shape()?;
                if let ConstructionData::Transform { base_id, .. } = &e.construction {
                    let Some(&b) = index.get(base_id) else {
                        return Err(CatalogError::DanglingBase { id: e.id.clone(), base_id: base_id.clone() });
                    };
                    let base: &CatalogEntry = &entries[b];
                    if base.modulus != e.modulus || base.length != e.length {
                        return Err(CatalogError::Invalid {
                            id: e.id.clone(),
                            message: format!("base {base_id} has modulus {} and length {}", base.modulus, base.length),
                        });
                    }
                }
                if index.insert(e.id.clone(), entries.len()).is_some() {
                    return Err(CatalogError::Duplicate(e.id.clone()));
                }
                entries.push(e.clone());
            }
        }
        Ok(Self { files, entries, index, codes: Mutex::default() })
    }

    pub fn load_file(path: &Path) -> Result<CatalogFile, CatalogError> {
        let text = read(path)?;
        CatalogFile::parse(&path.display().to_string(), &text)
    }

    /// Loads a single table file, an index file, or a directory holding
    /// `index.json`.
    pub fn load(path: &Path) -> Result<Self, CatalogError> {
        let index_path = if path.is_dir() { path.join("index.json") } else { path.to_path_buf() };
        let text = read(&index_path)?;
        let origin = index_path.display().to_string();
        let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| CatalogError::Syntax {
            origin: origin.clone(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if value.get("schema").and_then(|s| s.as_str()) == Some(INDEX_SCHEMA) {
            let idx: CatalogIndex = serde_json::from_value(value).map_err(|e| CatalogError::Syntax {
                origin: origin.clone(),
                line: 0,
                column: 0,
                message: e.to_string(),
            })?;
            let dir = index_path.parent().unwrap_or(Path::new("."));
            let files = idx.tables.iter().map(|t| Self::load_file(&dir.join(t))).collect::<Result<Vec<_>, _>>()?;
            Self::from_files(files)
        } else {
            Self::from_files(vec![CatalogFile::parse(&origin, &text)?])
        }
    }

    /// The catalog compiled into this crate.
    pub fn shipped() -> Self {
        let files = crate::shipped::TABLES
            .iter()
            .map(|(name, text)| CatalogFile::parse(name, text).expect("shipped table parses"))
            .collect();
        Self::from_files(files).expect("shipped catalog validates")
    }

    pub fn files(&self) -> &[CatalogFile] {
        &self.files
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn get(&self, id: &str) -> Option<&CatalogEntry> {
        self.index.get(id).map(|&i| &self.entries[i])
    }

    /// Entries whose id matches `pattern`, where `*` matches any run of
    /// characters. Returned in catalog order.
    pub fn select(&self, pattern: &str) -> Vec<&CatalogEntry> {
        self.entries.iter().filter(|e| glob_match(pattern, &e.id)).collect()
    }

    /// Builds the code of `id`, materializing bases first. Transform
    /// entries go through the Type II neighbor preconditions.
    pub fn materialize(&self, id: &str) -> Result<Arc<StdFormCode>, CatalogError> {
        if let Some(c) = self.codes.lock().expect("cache lock").get(id) {
            return Ok(c.clone());
        }
        let e = self.get(id).ok_or_else(|| CatalogError::Unknown(id.to_string()))?;
        let wrap = |source| CatalogError::Construct { id: id.to_string(), source };
        let m = Modulus::new(e.modulus).map_err(wrap)?;
        let vec = |v: &[u32]| RingVector::new(m, v.to_vec()).map_err(wrap);
        let code = match &e.construction {
            ConstructionData::FourNegacirculant { r_a, r_b } => {
                four_negacirculant(&FourNegaSpec::new(vec(r_a)?, vec(r_b)?).map_err(wrap)?)
            }
            ConstructionData::Transform { base_id, x, y } => {
                let base = self.materialize(base_id)?;
                let spec = TransformSpec::new((*base).clone(), vec(x)?, vec(y)?).map_err(wrap)?;
                neighbor_type_ii(&spec).map_err(wrap)?
            }
        };
        let code = Arc::new(code);
        self.codes.lock().expect("cache lock").insert(id.to_string(), code.clone());
        Ok(code)
    }

    /// Base entry of a transform, if any.
    pub fn base_of(&self, id: &str) -> Option<&CatalogEntry> {
        match &self.get(id)?.construction {
            ConstructionData::Transform { base_id, .. } => self.get(base_id),
            ConstructionData::FourNegacirculant { .. } => None,
        }
    }
}

fn read(path: &Path) -> Result<String, CatalogError> {
    std::fs::read_to_string(path).map_err(|source| CatalogError::Io { path: path.to_path_buf(), source })
}

pub fn glob_match(pattern: &str, s: &str) -> bool {
    let (p, t) = (pattern.as_bytes(), s.as_bytes());
    let (mut pi, mut ti) = (0, 0);
    let mut star: Option<(usize, usize)> = None;
    while ti < t.len() {
        if pi < p.len() && p[pi] == b'*' {
            star = Some((pi, ti));
            pi += 1;
        } else if pi < p.len() && (p[pi] == b'?' || p[pi] == t[ti]) {
            pi += 1;
            ti += 1;
        } else if let Some((sp, st)) = star {
            pi = sp + 1;
            ti = st + 1;
            star = Some((sp, st + 1));
        } else {
            return false;
        }
    }
    p[pi..].iter().all(|&c| c == b'*')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn globbing() {
        assert!(glob_match("C_8_24_*", "C_8_24_3"));
        assert!(!glob_match("C_8_24_*", "C_18_24_3"));
        assert!(glob_match("*", "anything"));
        assert!(glob_match("C_*_32_?", "C_10_32_5"));
        assert!(!glob_match("C_4_64_1", "C_4_64_10"));
    }

    #[test]
    fn empty_file() {
        let f =
            CatalogFile { schema: SCHEMA.into(), table: "empty".into(), description: String::new(), entries: vec![] };
        let text = f.to_canonical_string();
        let back = CatalogFile::parse("empty", &text).unwrap();
        assert_eq!(back, f);
        assert!(Catalog::from_files(vec![back]).unwrap().entries().is_empty());
    }
}
