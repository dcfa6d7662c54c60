//! Record formats and the on-disk orbit database.
//!
//! Text records: a `d=<d> n=<N>` header followed by one label per line as
//! space-separated digits. Lines starting with `#` are comments, except
//! `# meta <json>`, which carries the record's metadata. Structured records are
//! one JSON object per line with fields `d`, `labels` and optional `meta`.

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::canon::{canonical_form, CanonicalKey};
use crate::enumeration::OrbitLevel;
use crate::error::{Error, Result};
use crate::label::{check_dim, encode, CubeLabel};
use crate::packing::{is_nonextendible, LabelCodes, LabelSet, Packing};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordMeta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub key: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nonextendible: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingRecord {
    #[serde(rename = "d")]
    pub dim: usize,
    pub labels: Vec<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<RecordMeta>,
}

impl PackingRecord {
    pub fn from_set<S: LabelCodes + ?Sized>(s: &S) -> Self {
        PackingRecord { dim: s.dim(), labels: s.labels().iter().map(|l| l.coords()).collect(), meta: None }
    }

    /// Record with size, key and non-extendibility filled in.
    pub fn described(p: &Packing) -> Self {
        let mut r = Self::from_set(p);
        r.meta = Some(RecordMeta {
            key: Some(canonical_form(p).to_string()),
            size: Some(p.len()),
            nonextendible: Some(is_nonextendible(p)),
            ..Default::default()
        });
        r
    }

    pub fn with_meta(mut self, meta: RecordMeta) -> Self {
        self.meta = Some(meta);
        self
    }

    fn check_labels(&self) -> Result<()> {
        check_dim(self.dim)?;
        for l in &self.labels {
            Error::check_dim(self.dim, l.len())?;
            CubeLabel::new(l)?;
        }
        Ok(())
    }

    pub fn to_set(&self) -> Result<LabelSet> {
        self.check_labels()?;
        LabelSet::from_codes(self.dim, self.labels.iter().map(|l| encode(l)).collect())
    }

    pub fn to_packing(&self) -> Result<Packing> {
        Packing::try_from_set(self.to_set()?)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("d={} n={}\n", self.dim, self.labels.len());
        if let Some(m) = &self.meta {
            s.push_str(&format!("# meta {}\n", serde_json::to_string(m).expect("plain record")));
        }
        for l in &self.labels {
            let parts: Vec<String> = l.iter().map(|c| c.to_string()).collect();
            s.push_str(&parts.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("plain record")
    }

    /// Checks the labels; unless `raw`, they must also form a packing.
    fn validate(&self, raw: bool) -> Result<()> {
        if raw {
            self.to_set().map(|_| ())
        } else {
            self.to_packing().map(|_| ())
        }
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn at_line(line: usize, e: Error) -> Error {
    match e {
        Error::Parse { .. } => e,
        other => parse_err(line, other.to_string()),
    }
}

/// Parses concatenated text records.
pub fn parse_text(input: &str, raw: bool) -> Result<Vec<PackingRecord>> {
    let mut out = Vec::new();
    let mut lines = input.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).peekable();
    while let Some((no, line)) = lines.next() {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let header = |field: &str, tok: Option<&str>| -> Result<usize> {
            tok.and_then(|t| t.strip_prefix(field))
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| parse_err(no, format!("expected `d=<d> n=<N>`, got {line:?}")))
        };
        let mut toks = line.split_whitespace();
        let dim = header("d=", toks.next())?;
        let n = header("n=", toks.next())?;
        check_dim(dim).map_err(|e| at_line(no, e))?;
        let mut rec = PackingRecord { dim, labels: Vec::with_capacity(n), meta: None };
        while rec.labels.len() < n {
            let (no, line) = lines.next().ok_or_else(|| parse_err(no, format!("record ends after {} of {n} labels", rec.labels.len())))?;
            if let Some(m) = line.strip_prefix("# meta ") {
                rec.meta = Some(serde_json::from_str(m).map_err(|e| parse_err(no, e.to_string()))?);
                continue;
            }
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let label: Vec<u8> = line
                .split_whitespace()
                .map(|t| t.parse::<u8>().map_err(|_| parse_err(no, format!("bad digit {t:?}"))))
                .collect::<Result<_>>()?;
            if label.len() != dim {
                return Err(parse_err(no, format!("label has {} coordinates, expected {dim}", label.len())));
            }
            if let Some(&bad) = label.iter().find(|&&c| c > 3) {
                return Err(Error::Validation(format!("line {no}: coordinate {bad} outside 0..=3")));
            }
            rec.labels.push(label);
        }
        if n == 0 {
            if let Some(&(no, m)) = lines.peek() {
                if let Some(m) = m.strip_prefix("# meta ") {
                    rec.meta = Some(serde_json::from_str(m).map_err(|e| parse_err(no, e.to_string()))?);
                    lines.next();
                }
            }
        }
        rec.validate(raw).map_err(|e| match e {
            Error::Validation(m) => Error::Validation(format!("record at line {no}: {m}")),
            other => at_line(no, other),
        })?;
        out.push(rec);
    }
    Ok(out)
}

pub fn parse_json_lines(input: &str, raw: bool) -> Result<Vec<PackingRecord>> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let rec: PackingRecord = serde_json::from_str(line).map_err(|e| parse_err(i + 1, e.to_string()))?;
        if rec.labels.iter().flatten().any(|&c| c > 3) {
            return Err(Error::Validation(format!("line {}: coordinate outside 0..=3", i + 1)));
        }
        rec.validate(raw).map_err(|e| match e {
            Error::Validation(m) => Error::Validation(format!("line {}: {m}", i + 1)),
            other => at_line(i + 1, other),
        })?;
        out.push(rec);
    }
    Ok(out)
}

/// Either format, chosen by the first non-blank character.
pub fn parse_records(input: &str, raw: bool) -> Result<Vec<PackingRecord>> {
    if input.trim_start().starts_with('{') {
        parse_json_lines(input, raw)
    } else {
        parse_text(input, raw)
    }
}

pub fn read_records(path: &Path, raw: bool) -> Result<Vec<PackingRecord>> {
    parse_records(&fs::read_to_string(path)?, raw)
}

/// Completion state of one stored level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub count: usize,
    pub nonextendible: usize,
    pub complete: bool,
}

/// Directory of per-level key files (`d<d>-n<N>.keys`, one `<key> <0|1>` line
/// per orbit, the flag marking non-extendible orbits) and an append-only
/// `manifest.jsonl`; the last manifest line for a level wins.
#[derive(Clone, Debug)]
pub struct OrbitDatabase {
    root: PathBuf,
}

impl OrbitDatabase {
    pub fn open(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        fs::create_dir_all(&root)?;
        Ok(OrbitDatabase { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn level_path(&self, d: usize, n: usize) -> PathBuf {
        self.root.join(format!("d{d}-n{n}.keys"))
    }

    /// Appends the orbits of one level. Keys already stored for the level are
    /// skipped, so interrupted runs can be resumed.
    pub fn append_level(&self, level: &OrbitLevel, nonextendible: &[bool], complete: bool) -> Result<Manifest> {
        Error::check_dim(level.len(), nonextendible.len())?;
        let (d, n) = (level.dim(), level.size());
        let existing = self.read_level_keys(d, n)?;
        let known: std::collections::HashSet<&CanonicalKey> = existing.iter().map(|(k, _)| k).collect();
        let mut w = BufWriter::new(OpenOptions::new().create(true).append(true).open(self.level_path(d, n))?);
        let mut ne = existing.iter().filter(|(_, f)| *f).count();
        let mut count = existing.len();
        for (k, &f) in level.keys().iter().zip(nonextendible) {
            if known.contains(k) {
                continue;
            }
            writeln!(w, "{k} {}", f as u8)?;
            count += 1;
            ne += f as usize;
        }
        w.flush()?;
        let m = Manifest { d, n, count, nonextendible: ne, complete };
        let mut mf = OpenOptions::new().create(true).append(true).open(self.root.join("manifest.jsonl"))?;
        writeln!(mf, "{}", serde_json::to_string(&m).expect("plain record"))?;
        Ok(m)
    }

    fn read_level_keys(&self, d: usize, n: usize) -> Result<Vec<(CanonicalKey, bool)>> {
        let path = self.level_path(d, n);
        if !path.exists() {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        for (i, line) in BufReader::new(File::open(path)?).lines().enumerate() {
            let line = line?;
            let (k, f) = line.split_once(' ').ok_or_else(|| parse_err(i + 1, "expected `<key> <flag>`"))?;
            let key: CanonicalKey = k.parse().map_err(|e| at_line(i + 1, e))?;
            let flag = match f {
                "0" => false,
                "1" => true,
                _ => return Err(parse_err(i + 1, format!("bad flag {f:?}"))),
            };
            if key.dim() != d || key.len() != n {
                return Err(parse_err(i + 1, format!("key {key} does not belong to level d={d} N={n}")));
            }
            out.push((key, flag));
        }
        Ok(out)
    }

    /// Latest manifest per level, sorted by `(d, N)`.
    pub fn manifests(&self) -> Result<Vec<Manifest>> {
        let path = self.root.join("manifest.jsonl");
        if !path.exists() {
            return Ok(Vec::new());
        }
        let mut latest = std::collections::BTreeMap::new();
        for (i, line) in BufReader::new(File::open(path)?).lines().enumerate() {
            let m: Manifest = serde_json::from_str(&line?).map_err(|e| parse_err(i + 1, e.to_string()))?;
            latest.insert((m.d, m.n), m);
        }
        Ok(latest.into_values().collect())
    }

    /// Reads a level and checks it against its manifest.
    pub fn load_level(&self, d: usize, n: usize) -> Result<(OrbitLevel, Vec<bool>, Manifest)> {
        let m = self
            .manifests()?
            .into_iter()
            .find(|m| m.d == d && m.n == n)
            .ok_or_else(|| Error::invalid(format!("no manifest for d={d} N={n}")))?;
        let mut entries = self.read_level_keys(d, n)?;
        if entries.len() != m.count {
            return Err(Error::Validation(format!("level d={d} N={n}: {} keys but manifest says {}", entries.len(), m.count)));
        }
        entries.sort_unstable();
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Validation(format!("level d={d} N={n} has duplicate keys")));
        }
        let flags = entries.iter().map(|(_, f)| *f).collect();
        let level = OrbitLevel::from_keys(d, n, entries.into_iter().map(|(k, _)| k).collect())?;
        Ok((level, flags, m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::{enumerate_levels, EnumerationOptions};
    use crate::packing::{regular_tiling, sparse_packing_3d};
    use crate::stochastic::{random_packing, SearchConfig};

    #[test]
    fn text_round_trip() {
        let p = sparse_packing_3d();
        let r = PackingRecord::from_set(&p);
        let text = r.to_text();
        assert_eq!(text.lines().count(), 5);
        let back = parse_text(&text, false).unwrap();
        assert_eq!(back, vec![r]);
        assert_eq!(back[0].to_packing().unwrap(), p);

        let empty = PackingRecord::from_set(&Packing::empty(2).unwrap());
        assert_eq!(empty.to_text(), "d=2 n=0\n");
        assert_eq!(parse_text("d=2 n=0\n", false).unwrap(), vec![empty]);
    }

    #[test]
    fn random_records_round_trip() {
        let mut text = String::new();
        let mut json = String::new();
        let mut recs = Vec::new();
        for seed in 0..1000u64 {
            let d = 1 + (seed % 5) as usize;
            let p = random_packing(d, &SearchConfig { seed, ..Default::default() }).unwrap();
            let mut r = PackingRecord::described(&p);
            r.meta.as_mut().unwrap().seed = Some(seed);
            text.push_str(&r.to_text());
            json.push_str(&r.to_json_line());
            json.push('\n');
            recs.push(r);
        }
        assert_eq!(parse_text(&text, false).unwrap(), recs);
        assert_eq!(parse_json_lines(&json, false).unwrap(), recs);
        assert_eq!(parse_records(&json, false).unwrap(), recs);
    }

    #[test]
    fn parse_errors_carry_lines() {
        let err = parse_text("d=2 n=2\n0 0\n0 x\n", false).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_text("d=2 n=2\n0 0\n", false).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        let err = parse_text("d=2 n=1\n0 7\n", false).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
        let err = parse_json_lines("{\"d\":2,\"labels\":[[0,0]]}\n{oops\n", false).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn overlapping_sets_need_raw() {
        let text = "d=2 n=2\n0 0\n1 1\n";
        assert!(matches!(parse_text(text, false), Err(Error::Validation(_))));
        assert_eq!(parse_text(text, true).unwrap()[0].to_set().unwrap().len(), 2);
    }

    #[test]
    fn database_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let db = OrbitDatabase::open(dir.path()).unwrap();
        let mut stored = Vec::new();
        enumerate_levels(3, 8, &EnumerationOptions::default(), |level, ne| {
            db.append_level(level, ne, true).unwrap();
            stored.push((level.clone(), ne.to_vec()));
            Ok(())
        })
        .unwrap();
        for (level, ne) in &stored {
            let (back, flags, m) = db.load_level(3, level.size()).unwrap();
            assert_eq!(back.keys(), level.keys());
            assert_eq!(&flags, ne);
            assert!(m.complete);
            assert_eq!(m.count, level.len());
        }
        // re-appending is idempotent
        let (level, ne) = &stored[4];
        db.append_level(level, ne, true).unwrap();
        assert_eq!(db.load_level(3, 4).unwrap().2.count, level.len());
        assert_eq!(db.manifests().unwrap().len(), stored.len());
        assert!(db.load_level(3, 9).is_err());
        let t = regular_tiling(3).unwrap();
        assert!(db.load_level(3, 8).unwrap().0.keys().contains(&canonical_form(&t)));
    }
}
