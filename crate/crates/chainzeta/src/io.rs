//! File formats: edge lists, vectors, chain files, and the binary
//! precomputation cache.
//!
//! Edge list: one or two whitespace-separated tokens per line. Two tokens
//! `a b` declare the edge `a -> b` (so `b` is below `a` in the poset); a
//! single token declares an isolated vertex. `#` starts a comment.
//!
//! Vector files: text is one decimal per line (integers stay exact; any
//! non-integer token switches the whole vector to floats); binary starts
//! with the magic `CZVEC1`. Chain files: one chain per line, vertex labels
//! whitespace-separated.
//!
//! The cache is little-endian binary: magic, SHA-256 of the source edge
//! file, then the decomposition, nearest-in-chain map, level partition and
//! labels, followed by a SHA-256 of everything after the source hash. Both
//! hashes are verified on load.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use byteorder::{ReadBytesExt, WriteBytesExt, LE};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::chain::ChainDecomposition;
use crate::niv::NivMap;
use crate::parallel::AntichainPartition;

/// First bytes of a binary vector file.
pub const VECTOR_MAGIC: &[u8; 6] = b"CZVEC1";
/// First bytes of a cache file.
pub const CACHE_MAGIC: &[u8; 8] = b"CZCACHE1";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },
    #[error("unknown vertex label {label:?}")]
    UnknownLabel { label: String },
    #[error("cache file corrupt: {message}")]
    CacheFormat { message: String },
    #[error("cache integrity check failed: payload hash mismatch")]
    CacheHashMismatch,
    #[error("cache does not match this input: source hash mismatch")]
    SourceHashMismatch,
}

fn io_err(path: &Path, source: std::io::Error) -> IoError {
    IoError::Io { path: path.display().to_string(), source }
}

pub fn sha256_bytes(bytes: &[u8]) -> [u8; 32] {
    Sha256::digest(bytes).into()
}

/// Reads and hashes a whole file; the hash keys caches to their source.
pub fn read_and_hash(path: &Path) -> Result<(Vec<u8>, [u8; 32]), IoError> {
    let bytes = std::fs::read(path).map_err(|e| io_err(path, e))?;
    let hash = sha256_bytes(&bytes);
    Ok((bytes, hash))
}

/// Parses edge-list text into `(edges, isolated vertices)`.
pub fn parse_edge_list(text: &str, path: &str) -> Result<(Vec<(String, String)>, Vec<String>), IoError> {
    let mut edges = Vec::new();
    let mut vertices = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let a = tokens.next().expect("non-empty line has a token");
        match (tokens.next(), tokens.next()) {
            (None, _) => vertices.push(a.to_string()),
            (Some(b), None) => edges.push((a.to_string(), b.to_string())),
            (Some(_), Some(_)) => {
                return Err(IoError::Parse {
                    path: path.to_string(),
                    line: ln + 1,
                    message: "expected one token (vertex) or two (edge)".into(),
                })
            }
        }
    }
    Ok((edges, vertices))
}

pub fn read_edge_list(path: &Path) -> Result<(Vec<(String, String)>, Vec<String>), IoError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    parse_edge_list(&text, &path.display().to_string())
}

/// Writes a DAG as an edge list: isolated vertices first, then edges by
/// label. `build_dag` on the result reproduces an isomorphic poset.
pub fn write_edge_list(d: &crate::dag::Dag, path: &Path) -> Result<(), IoError> {
    let mut w = BufWriter::new(File::create(path).map_err(|e| io_err(path, e))?);
    let wrap = |e: std::io::Error| io_err(path, e);
    writeln!(w, "# {} vertices, {} edges", d.n(), d.edge_count()).map_err(wrap)?;
    let mut isolated = vec![true; d.n()];
    for (u, v) in d.edges() {
        isolated[u as usize] = false;
        isolated[v as usize] = false;
    }
    for v in 0..d.n() {
        if isolated[v] {
            writeln!(w, "{}", d.label(v)).map_err(wrap)?;
        }
    }
    for (u, v) in d.edges() {
        writeln!(w, "{} {}", d.label(u as usize), d.label(v as usize)).map_err(wrap)?;
    }
    w.flush().map_err(wrap)
}

/// Chain file: one chain per line as whitespace-separated vertex labels.
pub fn read_chains_file(path: &Path) -> Result<Vec<Vec<String>>, IoError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut chains = Vec::new();
    for raw in text.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        chains.push(line.split_whitespace().map(str::to_string).collect());
    }
    Ok(chains)
}

/// A vector of poset values; integer files stay exact, everything else is
/// read as doubles.
#[derive(Clone, Debug, PartialEq)]
pub enum VectorData {
    Int(Vec<i64>),
    Float(Vec<f64>),
}

impl VectorData {
    pub fn len(&self) -> usize {
        match self {
            VectorData::Int(v) => v.len(),
            VectorData::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn parse_vector_text(text: &str, path: &str) -> Result<VectorData, IoError> {
    let mut ints: Option<Vec<i64>> = Some(Vec::new());
    let mut floats: Vec<f64> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let f: f64 = line.parse().map_err(|_| IoError::Parse {
            path: path.to_string(),
            line: ln + 1,
            message: format!("not a number: {line:?}"),
        })?;
        floats.push(f);
        if let Some(iv) = &mut ints {
            match line.parse::<i64>() {
                Ok(i) => iv.push(i),
                Err(_) => ints = None,
            }
        }
    }
    Ok(match ints {
        Some(iv) => VectorData::Int(iv),
        None => VectorData::Float(floats),
    })
}

/// Reads a vector file, sniffing the binary magic and falling back to text.
pub fn read_vector(path: &Path) -> Result<VectorData, IoError> {
    let bytes = std::fs::read(path).map_err(|e| io_err(path, e))?;
    if bytes.starts_with(VECTOR_MAGIC) {
        return parse_vector_binary(&bytes, &path.display().to_string());
    }
    let text = String::from_utf8(bytes).map_err(|_| IoError::Parse {
        path: path.display().to_string(),
        line: 0,
        message: "not UTF-8 text and not a binary vector".into(),
    })?;
    parse_vector_text(&text, &path.display().to_string())
}

fn parse_vector_binary(bytes: &[u8], path: &str) -> Result<VectorData, IoError> {
    let fail = |message: &str| IoError::Parse { path: path.to_string(), line: 0, message: message.into() };
    let mut r = &bytes[VECTOR_MAGIC.len()..];
    let tag = r.read_u8().map_err(|_| fail("truncated header"))?;
    let len = r.read_u64::<LE>().map_err(|_| fail("truncated header"))? as usize;
    let want = len.checked_mul(8).ok_or_else(|| fail("length overflow"))?;
    if r.len() != want {
        return Err(fail("payload length does not match header"));
    }
    match tag {
        0 => {
            let mut v = vec![0i64; len];
            r.read_i64_into::<LE>(&mut v).map_err(|_| fail("truncated payload"))?;
            Ok(VectorData::Int(v))
        }
        1 => {
            let mut v = vec![0f64; len];
            r.read_f64_into::<LE>(&mut v).map_err(|_| fail("truncated payload"))?;
            Ok(VectorData::Float(v))
        }
        _ => Err(fail("unknown element type tag")),
    }
}

/// Output encoding for [`write_vector`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VectorFormat {
    Text,
    Binary,
}

/// Writes a vector; text integers print exactly, text floats use the
/// shortest representation that parses back to the same bits.
pub fn write_vector(data: &VectorData, format: VectorFormat, path: &Path) -> Result<(), IoError> {
    let mut w = BufWriter::new(File::create(path).map_err(|e| io_err(path, e))?);
    let wrap = |e: std::io::Error| io_err(path, e);
    match format {
        VectorFormat::Text => {
            match data {
                VectorData::Int(v) => {
                    for x in v {
                        writeln!(w, "{x}").map_err(wrap)?;
                    }
                }
                VectorData::Float(v) => {
                    for x in v {
                        writeln!(w, "{x}").map_err(wrap)?;
                    }
                }
            }
        }
        VectorFormat::Binary => {
            w.write_all(VECTOR_MAGIC).map_err(wrap)?;
            match data {
                VectorData::Int(v) => {
                    w.write_u8(0).map_err(wrap)?;
                    w.write_u64::<LE>(v.len() as u64).map_err(wrap)?;
                    for &x in v {
                        w.write_i64::<LE>(x).map_err(wrap)?;
                    }
                }
                VectorData::Float(v) => {
                    w.write_u8(1).map_err(wrap)?;
                    w.write_u64::<LE>(v.len() as u64).map_err(wrap)?;
                    for &x in v {
                        w.write_f64::<LE>(x).map_err(wrap)?;
                    }
                }
            }
        }
    }
    w.flush().map_err(wrap)
}

/// Everything `cmd_transform` needs, as loaded from a cache file.
pub struct Precomputed {
    pub source_hash: [u8; 32],
    pub labels: Vec<String>,
    pub cd: ChainDecomposition,
    pub nm: NivMap,
    pub ap: AntichainPartition,
}

struct HashingWriter<W: Write> {
    inner: W,
    hasher: Sha256,
}

impl<W: Write> Write for HashingWriter<W> {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        let n = self.inner.write(buf)?;
        self.hasher.update(&buf[..n]);
        Ok(n)
    }

    fn flush(&mut self) -> std::io::Result<()> {
        self.inner.flush()
    }
}

struct HashingReader<R: Read> {
    inner: R,
    hasher: Sha256,
}

impl<R: Read> Read for HashingReader<R> {
    fn read(&mut self, buf: &mut [u8]) -> std::io::Result<usize> {
        let n = self.inner.read(buf)?;
        self.hasher.update(&buf[..n]);
        Ok(n)
    }
}

fn write_u32s<W: Write>(w: &mut W, data: &[u32]) -> std::io::Result<()> {
    for &x in data {
        w.write_u32::<LE>(x)?;
    }
    Ok(())
}

fn read_u32s<R: Read>(r: &mut R, len: usize) -> std::io::Result<Vec<u32>> {
    let mut v = vec![0u32; len];
    r.read_u32_into::<LE>(&mut v)?;
    Ok(v)
}

/// Writes the binary cache. The payload carries the decomposition
/// (`next`, `id`), level map, nearest-in-chain rows and labels; a trailing
/// SHA-256 of the payload guards integrity and `source_hash` ties the
/// cache to the exact input file bytes.
pub fn write_cache(
    path: &Path,
    source_hash: [u8; 32],
    labels: &[String],
    cd: &ChainDecomposition,
    nm: &NivMap,
    ap: &AntichainPartition,
) -> Result<(), IoError> {
    let file = BufWriter::new(File::create(path).map_err(|e| io_err(path, e))?);
    let mut w = HashingWriter { inner: file, hasher: Sha256::new() };
    let result: std::io::Result<()> = (|| {
        w.inner.write_all(CACHE_MAGIC)?;
        w.inner.write_all(&source_hash)?;
        // Everything below this point is hashed.
        let n = cd.n();
        let (row_offsets, entry_chains, entry_vertices) = nm.raw_parts();
        w.write_u64::<LE>(n as u64)?;
        w.write_u64::<LE>(cd.k() as u64)?;
        w.write_u64::<LE>(entry_vertices.len() as u64)?;
        write_u32s(&mut w, cd.next())?;
        for v in 0..n {
            w.write_u32::<LE>(cd.id_of(v))?;
        }
        for v in 0..n {
            w.write_u32::<LE>(ap.level_of(v))?;
        }
        for &off in row_offsets {
            w.write_u64::<LE>(off as u64)?;
        }
        write_u32s(&mut w, entry_chains)?;
        write_u32s(&mut w, entry_vertices)?;
        for label in labels {
            w.write_u32::<LE>(label.len() as u32)?;
            w.write_all(label.as_bytes())?;
        }
        Ok(())
    })();
    result.map_err(|e| io_err(path, e))?;
    let digest: [u8; 32] = w.hasher.finalize().into();
    let mut file = w.inner;
    file.write_all(&digest).map_err(|e| io_err(path, e))?;
    file.flush().map_err(|e| io_err(path, e))
}

/// Loads and verifies a cache file. Structural sanity is re-validated, so
/// a cache that passes cannot put the transforms into undefined behavior.
pub fn read_cache(path: &Path) -> Result<Precomputed, IoError> {
    let file = BufReader::new(File::open(path).map_err(|e| io_err(path, e))?);
    let mut outer = file;
    let mut magic = [0u8; 8];
    outer.read_exact(&mut magic).map_err(|e| io_err(path, e))?;
    if &magic != CACHE_MAGIC {
        return Err(IoError::CacheFormat { message: "bad magic".into() });
    }
    let mut source_hash = [0u8; 32];
    outer.read_exact(&mut source_hash).map_err(|e| io_err(path, e))?;

    let file_len = std::fs::metadata(path).map_err(|e| io_err(path, e))?.len();
    let mut r = HashingReader { inner: outer, hasher: Sha256::new() };
    let corrupt = |message: &str| IoError::CacheFormat { message: message.into() };
    let read = (|| -> std::io::Result<(Vec<String>, Vec<u32>, Vec<u32>, Vec<u32>, Vec<usize>, Vec<u32>, Vec<u32>)> {
        let invalid = |m: &str| std::io::Error::new(std::io::ErrorKind::InvalidData, m);
        let n = r.read_u64::<LE>()? as usize;
        let k = r.read_u64::<LE>()? as usize;
        let entries = r.read_u64::<LE>()? as usize;
        // Bound allocations by the file size before trusting the header.
        if n as u64 > file_len / 12 + 1 || entries as u64 > file_len / 8 + 1 || k > n.max(1) {
            return Err(invalid("implausible header"));
        }
        let next = read_u32s(&mut r, n)?;
        let id = read_u32s(&mut r, n)?;
        let level_of = read_u32s(&mut r, n)?;
        let mut row_offsets = vec![0usize; n + 1];
        for off in row_offsets.iter_mut() {
            *off = r.read_u64::<LE>()? as usize;
        }
        let entry_chains = read_u32s(&mut r, entries)?;
        let entry_vertices = read_u32s(&mut r, entries)?;
        let mut labels = Vec::with_capacity(n);
        for _ in 0..n {
            let len = r.read_u32::<LE>()? as usize;
            if len as u64 > file_len {
                return Err(invalid("implausible label length"));
            }
            let mut buf = vec![0u8; len];
            r.read_exact(&mut buf)?;
            let s = String::from_utf8(buf).map_err(|_| invalid("label not UTF-8"))?;
            labels.push(s);
        }
        Ok((labels, next, id, level_of, row_offsets, entry_chains, entry_vertices))
    })();
    let (labels, next, id, level_of, row_offsets, entry_chains, entry_vertices) = read.map_err(|e| {
        if e.kind() == std::io::ErrorKind::InvalidData {
            corrupt(&e.to_string())
        } else {
            io_err(path, e)
        }
    })?;
    let expected: [u8; 32] = r.hasher.finalize().into();
    let mut stored = [0u8; 32];
    let mut outer = r.inner;
    outer.read_exact(&mut stored).map_err(|e| io_err(path, e))?;
    if stored != expected {
        return Err(IoError::CacheHashMismatch);
    }
    let mut trailing = [0u8; 1];
    if outer.read(&mut trailing).map_err(|e| io_err(path, e))? != 0 {
        return Err(corrupt("trailing bytes after payload hash"));
    }

    let n = labels.len();
    if *row_offsets.last().unwrap() != entry_vertices.len() || row_offsets.windows(2).any(|w| w[0] > w[1]) {
        return Err(corrupt("row offsets inconsistent"));
    }
    if entry_vertices.iter().any(|&v| v as usize >= n) {
        return Err(corrupt("entry vertex out of range"));
    }
    let cd = ChainDecomposition::from_next_and_id(next, id).map_err(|message| corrupt(&message))?;
    if entry_chains.iter().any(|&c| c == 0 || c as usize > cd.k()) {
        return Err(corrupt("entry chain id out of range"));
    }
    if level_of.iter().enumerate().any(|(v, &l)| {
        let nx = cd.next()[v] as usize;
        nx != v && level_of[nx] >= l
    }) {
        return Err(corrupt("levels do not order the chains"));
    }
    let nm = NivMap::from_parts(row_offsets, entry_chains, entry_vertices);
    let ap = AntichainPartition::from_level_of(level_of);
    Ok(Precomputed { source_hash, labels, cd, nm, ap })
}
