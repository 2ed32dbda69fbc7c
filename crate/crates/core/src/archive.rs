//! The "SVA1" container: a store-only aggregate of files with per-entry
//! CRC-32, standing in for a zip archive. No compression — the point of the
//! container is deterministic byte-exact packing and loud tamper detection,
//! not size.
//!
//! Layout: `"SVA1"` then entry count (u32 LE), then per entry: path length
//! (u16 LE), path bytes (UTF-8, forward slashes), payload length (u64 LE),
//! payload CRC-32 (u32 LE), payload bytes.

use std::collections::HashSet;
use std::path::{Component, Path, PathBuf};
use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const ARCHIVE_MAGIC: &[u8; 4] = b"SVA1";

const MAX_PATH_BYTES: usize = 65535;

fn crc_table() -> &'static [u32; 256] {
    static TABLE: OnceLock<[u32; 256]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [0u32; 256];
        for (i, slot) in table.iter_mut().enumerate() {
            let mut crc = i as u32;
            for _ in 0..8 {
                crc = if crc & 1 != 0 {
                    (crc >> 1) ^ 0xEDB8_8320
                } else {
                    crc >> 1
                };
            }
            *slot = crc;
        }
        table
    })
}

/// CRC-32 with the reflected polynomial 0xEDB88320, init and final XOR
/// 0xFFFFFFFF (the zip/PNG variant).
pub fn crc32(data: &[u8]) -> u32 {
    let table = crc_table();
    let mut crc = 0xFFFF_FFFFu32;
    for &byte in data {
        crc = (crc >> 8) ^ table[((crc ^ byte as u32) & 0xFF) as usize];
    }
    !crc
}

/// One file inside the container. Construction validates the path and pins
/// the checksum, so a live `ArchiveEntry` always satisfies its invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArchiveEntry {
    path: String,
    payload: Vec<u8>,
    crc32: u32,
}

impl ArchiveEntry {
    pub fn new(path: impl Into<String>, payload: Vec<u8>) -> Result<Self> {
        let path = path.into();
        validate_path(&path)?;
        let crc32 = crc32(&payload);
        Ok(ArchiveEntry {
            path,
            payload,
            crc32,
        })
    }

    pub fn path(&self) -> &str {
        &self.path
    }

    pub fn payload(&self) -> &[u8] {
        &self.payload
    }

    pub fn crc32(&self) -> u32 {
        self.crc32
    }

    pub fn into_payload(self) -> Vec<u8> {
        self.payload
    }
}

/// Rejects anything that could escape the extraction root: absolute paths,
/// ".." or "." segments, empty segments, NULs, backslashes.
fn validate_path(path: &str) -> Result<()> {
    if path.is_empty() {
        return Err(Error::UnsafePath("empty path".into()));
    }
    if path.len() > MAX_PATH_BYTES {
        return Err(Error::Format(format!(
            "path exceeds {MAX_PATH_BYTES} bytes"
        )));
    }
    if path.contains('\0') {
        return Err(Error::UnsafePath(path.replace('\0', "\\0")));
    }
    if path.contains('\\') || path.starts_with('/') {
        return Err(Error::UnsafePath(path.into()));
    }
    for segment in path.split('/') {
        if segment.is_empty() || segment == "." || segment == ".." {
            return Err(Error::UnsafePath(path.into()));
        }
    }
    Ok(())
}

/// Serializes entries in the given order. Deterministic: the same entry list
/// always produces the same bytes.
pub fn pack(entries: &[ArchiveEntry]) -> Result<Vec<u8>> {
    let mut seen = HashSet::new();
    for entry in entries {
        if !seen.insert(entry.path.as_str()) {
            return Err(Error::Format(format!(
                "duplicate path in archive: {:?}",
                entry.path
            )));
        }
    }

    let mut out = Vec::with_capacity(
        8 + entries
            .iter()
            .map(|e| 14 + e.path.len() + e.payload.len())
            .sum::<usize>(),
    );
    out.extend_from_slice(ARCHIVE_MAGIC);
    out.extend_from_slice(&(entries.len() as u32).to_le_bytes());
    for entry in entries {
        out.extend_from_slice(&(entry.path.len() as u16).to_le_bytes());
        out.extend_from_slice(entry.path.as_bytes());
        out.extend_from_slice(&(entry.payload.len() as u64).to_le_bytes());
        out.extend_from_slice(&entry.crc32.to_le_bytes());
        out.extend_from_slice(&entry.payload);
    }
    Ok(out)
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&end| end <= self.buf.len())
            .ok_or_else(|| Error::Format("truncated archive".into()))?;
        let slice = &self.buf[self.pos..end];
        self.pos = end;
        Ok(slice)
    }

    fn u16_le(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32_le(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64_le(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

/// Inverse of [`pack`]. Input is treated as hostile: every length is bounds
/// checked, every path re-validated, every payload re-checksummed.
pub fn unpack(blob: &[u8]) -> Result<Vec<ArchiveEntry>> {
    let mut r = Reader { buf: blob, pos: 0 };
    let magic = r
        .take(4)
        .map_err(|_| Error::Format("archive shorter than its header".into()))?;
    if magic != ARCHIVE_MAGIC {
        return Err(Error::Format("bad archive magic".into()));
    }
    let count = r.u32_le()?;

    let mut entries = Vec::new();
    let mut seen = HashSet::new();
    for _ in 0..count {
        let path_len = r.u16_le()? as usize;
        let path_bytes = r.take(path_len)?;
        let path = std::str::from_utf8(path_bytes)
            .map_err(|_| Error::Format("archive path is not UTF-8".into()))?
            .to_owned();
        validate_path(&path)?;
        let payload_len = r.u64_le()?;
        let stored_crc = r.u32_le()?;
        if payload_len > (blob.len() - r.pos) as u64 {
            return Err(Error::Format("truncated archive".into()));
        }
        let payload = r.take(payload_len as usize)?.to_vec();
        let actual = crc32(&payload);
        if actual != stored_crc {
            return Err(Error::Integrity(format!(
                "CRC mismatch for {path:?}: stored {stored_crc:08x}, computed {actual:08x}"
            )));
        }
        if !seen.insert(path.clone()) {
            return Err(Error::Format(format!("duplicate path in archive: {path:?}")));
        }
        entries.push(ArchiveEntry {
            path,
            payload,
            crc32: stored_crc,
        });
    }
    if r.pos != blob.len() {
        return Err(Error::Format(format!(
            "{} trailing bytes after last entry",
            blob.len() - r.pos
        )));
    }
    Ok(entries)
}

/// Walks files and directories into a sorted entry list. A file input becomes
/// an entry named by its file name; a directory input contributes every file
/// beneath it, prefixed with the directory's own name. Sorting by path keeps
/// the archive independent of directory-walk order.
pub fn collect_entries(inputs: &[PathBuf]) -> Result<Vec<ArchiveEntry>> {
    let mut entries = Vec::new();
    for input in inputs {
        let meta = std::fs::metadata(input).map_err(|e| Error::io(input, e))?;
        if meta.is_file() {
            let name = input
                .file_name()
                .and_then(|n| n.to_str())
                .ok_or_else(|| Error::Format(format!("non-UTF-8 file name: {input:?}")))?;
            let payload = std::fs::read(input).map_err(|e| Error::io(input, e))?;
            entries.push(ArchiveEntry::new(name, payload)?);
        } else if meta.is_dir() {
            let base = input
                .file_name()
                .and_then(|n| n.to_str())
                .ok_or_else(|| Error::Format(format!("non-UTF-8 directory name: {input:?}")))?;
            for item in walkdir::WalkDir::new(input) {
                let item = item.map_err(|e| {
                    Error::Format(format!("walking {input:?}: {e}"))
                })?;
                if !item.file_type().is_file() {
                    continue;
                }
                let rel = item
                    .path()
                    .strip_prefix(input)
                    .expect("walkdir yields children of its root");
                let rel = rel
                    .to_str()
                    .ok_or_else(|| Error::Format(format!("non-UTF-8 path: {rel:?}")))?;
                let archive_path = format!("{base}/{}", rel.replace(std::path::MAIN_SEPARATOR, "/"));
                let payload =
                    std::fs::read(item.path()).map_err(|e| Error::io(item.path(), e))?;
                entries.push(ArchiveEntry::new(archive_path, payload)?);
            }
        } else {
            return Err(Error::Format(format!(
                "input {input:?} is neither a file nor a directory"
            )));
        }
    }
    entries.sort_by(|a, b| a.path.cmp(&b.path));
    for pair in entries.windows(2) {
        if pair[0].path == pair[1].path {
            return Err(Error::Format(format!(
                "duplicate input path: {:?}",
                pair[0].path
            )));
        }
    }
    Ok(entries)
}

/// Writes entries under `dest`, creating parent directories. Paths were
/// validated at construction, so the join cannot escape `dest`.
pub fn write_entries(dest: &Path, entries: &[ArchiveEntry]) -> Result<()> {
    for entry in entries {
        let mut target = dest.to_path_buf();
        for component in Path::new(&entry.path).components() {
            match component {
                Component::Normal(part) => target.push(part),
                _ => return Err(Error::UnsafePath(entry.path.clone())),
            }
        }
        if let Some(parent) = target.parent() {
            std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        std::fs::write(&target, &entry.payload).map_err(|e| Error::io(&target, e))?;
    }
    Ok(())
}
