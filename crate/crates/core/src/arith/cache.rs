use std::fs::{self, File};
use std::hash::Hasher;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use fnv::FnvHasher;

use super::sieve::MuTable;
use crate::error::{Error, Result};

/// Environment variable naming the default cache directory.
pub const CACHE_ENV: &str = "MOEBIUS_CACHE_DIR";

const MAGIC: &str = "MOEBIUS-TABLE v1 limit=";

pub fn cache_path(dir: &Path, limit: u64) -> PathBuf {
    dir.join(format!("moebius-{}.tbl", limit))
}

/// Writes the table into `dir`, returning the file path.
pub fn save_table(table: &MuTable, dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = cache_path(dir, table.limit());
    let tmp = path.with_extension("tbl.tmp");
    {
        let mut w = BufWriter::new(File::create(&tmp)?);
        w.write_all(format!("{}{}\n", MAGIC, table.limit()).as_bytes())?;
        let mut h = FnvHasher::default();
        let mu: Vec<u8> = table.mu_values()[1..].iter().map(|&v| v as u8).collect();
        h.write(&mu);
        w.write_all(&mu)?;
        for &m in &table.mertens_values()[1..] {
            let b = m.to_le_bytes();
            h.write(&b);
            w.write_all(&b)?;
        }
        w.write_all(&h.finish().to_le_bytes())?;
        w.flush()?;
    }
    fs::rename(&tmp, &path)?;
    Ok(path)
}

pub fn load_table(path: &Path) -> Result<MuTable> {
    let mut r = BufReader::new(File::open(path)?);
    let mut header = Vec::new();
    let mut byte = [0u8; 1];
    loop {
        r.read_exact(&mut byte)?;
        if byte[0] == b'\n' {
            break;
        }
        header.push(byte[0]);
        if header.len() > 64 {
            return Err(Error::Cache(format!("{}: header too long", path.display())));
        }
    }
    let header = String::from_utf8(header).map_err(|_| Error::Cache("header not UTF-8".into()))?;
    let limit: usize = header
        .strip_prefix(MAGIC)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Cache(format!("{}: bad header {:?}", path.display(), header)))?;
    if limit == 0 {
        return Err(Error::Cache("limit 0 in header".into()));
    }
    let mut h = FnvHasher::default();
    let mut raw = vec![0u8; limit];
    r.read_exact(&mut raw)?;
    h.write(&raw);
    let mu: Vec<i8> = raw.iter().map(|&b| b as i8).collect();
    let mut raw = vec![0u8; limit * 8];
    r.read_exact(&mut raw)?;
    h.write(&raw);
    let mertens: Vec<i64> = raw.chunks_exact(8).map(|c| i64::from_le_bytes(c.try_into().unwrap())).collect();
    let mut sum = [0u8; 8];
    r.read_exact(&mut sum)?;
    if u64::from_le_bytes(sum) != h.finish() {
        return Err(Error::Cache(format!("{}: checksum mismatch", path.display())));
    }
    let mut rest = Vec::new();
    r.read_to_end(&mut rest)?;
    if !rest.is_empty() {
        return Err(Error::Cache(format!("{}: trailing bytes", path.display())));
    }
    MuTable::from_parts(mu, mertens).map_err(|e| Error::Cache(e.to_string()))
}

/// Smallest cached table in `dir` whose limit is at least `min_limit`, truncated to `min_limit`.
pub fn find_cached(dir: &Path, min_limit: u64) -> Result<Option<MuTable>> {
    let Ok(entries) = fs::read_dir(dir) else {
        return Ok(None);
    };
    let mut best: Option<(u64, PathBuf)> = None;
    for e in entries.flatten() {
        let name = e.file_name();
        let Some(limit) = name
            .to_str()
            .and_then(|s| s.strip_prefix("moebius-"))
            .and_then(|s| s.strip_suffix(".tbl"))
            .and_then(|s| s.parse::<u64>().ok())
        else {
            continue;
        };
        if limit >= min_limit && best.as_ref().is_none_or(|(b, _)| limit < *b) {
            best = Some((limit, e.path()));
        }
    }
    match best {
        None => Ok(None),
        Some((limit, path)) => {
            let t = load_table(&path)?;
            if limit == min_limit {
                Ok(Some(t))
            } else {
                Ok(Some(t.truncated(min_limit)?))
            }
        }
    }
}
