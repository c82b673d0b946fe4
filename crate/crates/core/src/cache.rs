//! Plain-text persistence for the coefficient cache.
//!
//! One record per line, `A|C|B<TAB>value<LF>`, partitions in the literal
//! comma format with `0` for the zero partition, records sorted by key,
//! UTF-8 without a BOM. Writes go through a sibling temp file and a rename
//! so concurrent readers never observe a torn file; readers tolerate a
//! missing file.

use std::fs;
use std::path::Path;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::lr::{lr_coefficient, LrCache, LrKey};
use crate::partition::Partition;

fn parse_record(line: &str) -> std::result::Result<(LrKey, BigUint), String> {
    if line.contains('\r') {
        return Err("carriage return in record".into());
    }
    let (key_part, value_part) = line.split_once('\t').ok_or("missing tab separator")?;
    let mut fields = key_part.split('|');
    let (a, c, b) = match (fields.next(), fields.next(), fields.next(), fields.next()) {
        (Some(a), Some(c), Some(b), None) => (a, c, b),
        _ => return Err("key must be A|C|B".into()),
    };
    let a: Partition = a.parse().map_err(|e| format!("bad partition: {e}"))?;
    let c: Partition = c.parse().map_err(|e| format!("bad partition: {e}"))?;
    let b: Partition = b.parse().map_err(|e| format!("bad partition: {e}"))?;
    if value_part.is_empty() || !value_part.bytes().all(|x| x.is_ascii_digit()) {
        return Err("value must be a decimal integer".into());
    }
    let value = value_part
        .parse::<BigUint>()
        .map_err(|e| format!("bad value: {e}"))?;
    Ok((LrKey::new(&a, &c, &b), value))
}

/// Loads a cache file; a missing file yields an empty cache. With
/// `paranoid` set, every stored value is recomputed and must agree.
pub fn load_cache(path: &Path, paranoid: bool) -> Result<LrCache> {
    let text = match fs::read_to_string(path) {
        Ok(text) => text,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(LrCache::new()),
        Err(e) => return Err(e.into()),
    };
    let cache = LrCache::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let (key, value) =
            parse_record(line).map_err(|msg| Error::Format { line: line_no, msg })?;
        if paranoid {
            let fresh = lr_coefficient(key.inner(), key.content(), key.outer());
            if fresh != value {
                return Err(Error::Stale {
                    line: line_no,
                    stored: value.to_string(),
                    fresh: fresh.to_string(),
                });
            }
        }
        if cache.get(&key).is_some() {
            return Err(Error::Format {
                line: line_no,
                msg: "duplicate record".into(),
            });
        }
        cache.insert(key, value);
    }
    Ok(cache)
}

/// Writes all records sorted by key, replacing the file atomically.
pub fn store_cache(path: &Path, cache: &LrCache) -> Result<()> {
    let mut text = String::new();
    for (key, value) in cache.entries() {
        text.push_str(&format!(
            "{}|{}|{}\t{}\n",
            key.inner(),
            key.content(),
            key.outer(),
            value
        ));
    }
    let file_name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = path.with_file_name(format!("{}.{}.tmp", file_name, std::process::id()));
    fs::write(&tmp, text.as_bytes())?;
    fs::rename(&tmp, path)?;
    Ok(())
}
