use crate::elem::{Elem, LatticeKind};
use crate::lattice::Lattice;
use crate::LatticeError;
use horolab_lie::GroupElement;
use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Largest word length `enumerate_lattice` accepts.
pub const DEFAULT_WORD_CAP: usize = 14;

pub const CACHE_DIR_ENV: &str = "HOROLAB_CACHE_DIR";

/// A cusp vector (first column of some cached element) with its search key.
#[derive(Clone, Copy, Debug)]
pub(crate) struct CuspVec {
    /// Lower bound ingredient: the max-norm of the vector (a product over
    /// the two embeddings for the irreducible lattice).
    pub key: f64,
    /// Factor index (product lattice only).
    pub factor: usize,
    pub v: [horolab_lie::C64; 2],
    /// Second embedding for the irreducible lattice.
    pub v2: [f64; 2],
    pub shell: bool,
}

/// Immutable ball of lattice elements modulo the center.
#[derive(Clone, Debug)]
pub struct LatticeCache {
    pub lattice: Lattice,
    pub depth: usize,
    elems: Vec<Elem>,
    floats: Vec<GroupElement>,
    shell: Vec<bool>,
    /// Indices sorted by `dist_center`, identity first.
    by_key: Vec<(f64, u32)>,
    pub(crate) cusp_vecs: Vec<CuspVec>,
}

impl LatticeCache {
    fn from_elems(lattice: Lattice, depth: usize, mut elems: Vec<Elem>) -> Result<Self, LatticeError> {
        elems.sort();
        elems.dedup();
        let kind = lattice.kind;
        let gens = lattice.symmetric_generators();
        let set: HashSet<Elem> = elems.iter().copied().collect();
        let mut shell = Vec::with_capacity(elems.len());
        for e in &elems {
            let mut inside = true;
            for s in &gens {
                let n = e.mul(s, kind).ok_or(LatticeError::Overflow)?;
                if !set.contains(&n) {
                    inside = false;
                    break;
                }
            }
            shell.push(!inside);
        }
        let floats: Vec<GroupElement> = elems.iter().map(|e| e.to_group(kind)).collect();
        let mut by_key: Vec<(f64, u32)> =
            floats.iter().enumerate().map(|(i, g)| (g.dist_center(), i as u32)).collect();
        by_key.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let cusp_vecs = cusp_vectors(kind, &elems, &floats, &shell);
        Ok(LatticeCache { lattice, depth, elems, floats, shell, by_key, cusp_vecs })
    }

    pub fn kind(&self) -> LatticeKind {
        self.lattice.kind
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> &[Elem] {
        &self.elems
    }

    pub fn float(&self, i: usize) -> &GroupElement {
        &self.floats[i]
    }

    pub fn in_shell(&self, i: usize) -> bool {
        self.shell[i]
    }

    pub fn contains(&self, e: &Elem) -> bool {
        self.index_of(e).is_some()
    }

    pub fn index_of(&self, e: &Elem) -> Option<usize> {
        self.elems.binary_search(e).ok()
    }

    /// `(dist_center(gamma), index)` in increasing order.
    pub fn by_key(&self) -> &[(f64, u32)] {
        &self.by_key
    }

    pub fn shell_count(&self) -> usize {
        self.shell.iter().filter(|&&s| s).count()
    }
}

fn cusp_vectors(kind: LatticeKind, elems: &[Elem], floats: &[GroupElement], shell: &[bool]) -> Vec<CuspVec> {
    use std::collections::BTreeMap;
    // Deduplicate first columns up to sign; a column is in the shell only if
    // every element carrying it is.
    let mut cols: BTreeMap<(usize, [i64; 4]), (usize, bool)> = BTreeMap::new();
    for (i, e) in elems.iter().enumerate() {
        let c = &e.0;
        let keys: Vec<(usize, [i64; 4])> = match kind {
            LatticeKind::ZxZ => vec![(0, [c[0], 0, c[2], 0]), (1, [c[4], 0, c[6], 0])],
            _ => vec![(0, [c[0], c[1], c[4], c[5]])],
        };
        for (f, mut k) in keys {
            if k.iter().find(|&&v| v != 0).is_some_and(|&v| v < 0) {
                k.iter_mut().for_each(|v| *v = -*v);
            }
            let entry = cols.entry((f, k)).or_insert((i, true));
            entry.1 &= shell[i];
        }
    }
    let mut out: Vec<CuspVec> = cols
        .into_iter()
        .map(|((factor, _), (i, sh))| {
            let fs = floats[i].factors();
            let m = &fs[factor];
            let v = [m[(0, 0)], m[(1, 0)]];
            let n1 = v[0].norm().max(v[1].norm());
            let (v2, key) = if kind == LatticeKind::ZSqrt2 {
                let w = [fs[1][(0, 0)].re, fs[1][(1, 0)].re];
                (w, n1 * w[0].abs().max(w[1].abs()))
            } else {
                ([0.0; 2], n1)
            };
            CuspVec { key, factor, v: [v[0], v[1]], v2, shell: sh }
        })
        .collect();
    out.sort_by(|a, b| a.key.total_cmp(&b.key));
    out
}

/// Breadth-first enumeration of all elements of word length at most
/// `word_length` in the generators, modulo the center.
pub fn enumerate_lattice(lat: &Lattice, word_length: usize) -> Result<LatticeCache, LatticeError> {
    enumerate_with_cap(lat, word_length, DEFAULT_WORD_CAP)
}

pub fn enumerate_with_cap(lat: &Lattice, word_length: usize, cap: usize) -> Result<LatticeCache, LatticeError> {
    if word_length > cap {
        return Err(LatticeError::CapExceeded { requested: word_length, cap });
    }
    let kind = lat.kind;
    let gens = lat.symmetric_generators();
    let id = Elem::identity(kind);
    let mut seen: HashSet<Elem> = HashSet::from([id]);
    let mut frontier = vec![id];
    for _ in 0..word_length {
        let mut next = Vec::new();
        for e in &frontier {
            for s in &gens {
                let n = e.mul(s, kind).ok_or(LatticeError::Overflow)?;
                if seen.insert(n) {
                    next.push(n);
                }
            }
        }
        next.sort();
        frontier = next;
    }
    LatticeCache::from_elems(lat.clone(), word_length, seen.into_iter().collect())
}

/// Serialize in the cache file format: a header line and one sorted element per line.
pub fn format_cache(c: &LatticeCache) -> String {
    let mut s = String::with_capacity(32 * c.len() + 64);
    let _ = writeln!(s, "lattice={} depth={} count={}", c.kind().id(), c.depth, c.len());
    for e in &c.elems {
        let _ = writeln!(s, "{e}");
    }
    s
}

fn header_field<'a>(tok: Option<&'a str>, key: &str) -> Result<&'a str, LatticeError> {
    tok.and_then(|t| t.strip_prefix(key)).and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| LatticeError::Parse(format!("header: expected {key}=")))
}

/// Parse and validate a cache file: count, strict ordering, identity
/// membership, unit determinants, normalization and closure under inverse.
pub fn parse_cache(text: &str) -> Result<LatticeCache, LatticeError> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| LatticeError::Parse("empty file".into()))?;
    let mut toks = header.split(' ');
    let kind: LatticeKind = header_field(toks.next(), "lattice")?.parse()?;
    let depth: usize = header_field(toks.next(), "depth")?
        .parse()
        .map_err(|_| LatticeError::Parse("header: bad depth".into()))?;
    let count: usize = header_field(toks.next(), "count")?
        .parse()
        .map_err(|_| LatticeError::Parse("header: bad count".into()))?;
    if toks.next().is_some() {
        return Err(LatticeError::Parse("header: trailing fields".into()));
    }
    if depth > DEFAULT_WORD_CAP {
        return Err(LatticeError::CapExceeded { requested: depth, cap: DEFAULT_WORD_CAP });
    }
    if !text.ends_with('\n') {
        return Err(LatticeError::Parse("missing final newline".into()));
    }
    let mut elems = Vec::with_capacity(count.min(1 << 20));
    for (n, line) in lines.enumerate() {
        let mut c = [0i64; 8];
        let mut it = line.split(' ');
        for slot in &mut c {
            *slot = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| LatticeError::Parse(format!("line {}: expected 8 integers", n + 2)))?;
        }
        if it.next().is_some() {
            return Err(LatticeError::Parse(format!("line {}: too many fields", n + 2)));
        }
        let e = Elem(c);
        if e.normalized(kind) != e || !e.has_unit_det(kind) {
            return Err(LatticeError::Parse(format!("line {}: not a normalized group element", n + 2)));
        }
        if elems.last().is_some_and(|p: &Elem| *p >= e) {
            return Err(LatticeError::Parse(format!("line {}: not strictly sorted", n + 2)));
        }
        elems.push(e);
    }
    if elems.len() != count {
        return Err(LatticeError::Parse(format!("count {count} but {} elements", elems.len())));
    }
    if elems.binary_search(&Elem::identity(kind)).is_err() {
        return Err(LatticeError::Parse("identity missing".into()));
    }
    for e in &elems {
        if elems.binary_search(&e.inv(kind)).is_err() {
            return Err(LatticeError::Parse(format!("inverse of {e} missing")));
        }
    }
    LatticeCache::from_elems(Lattice::new(kind), depth, elems)
}

/// Directory for cache files: `$HOROLAB_CACHE_DIR` if set, else `default`.
pub fn cache_dir(default: &Path) -> PathBuf {
    std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| default.to_path_buf())
}

pub fn cache_path(dir: &Path, kind: LatticeKind, depth: usize) -> PathBuf {
    dir.join(format!("{}_d{}.cache", kind.id(), depth))
}

/// Read the cache from `dir` if a valid file exists, otherwise enumerate and write it.
pub fn load_or_build(lat: &Lattice, depth: usize, dir: &Path) -> Result<LatticeCache, LatticeError> {
    let path = cache_path(dir, lat.kind, depth);
    if let Ok(text) = std::fs::read_to_string(&path) {
        if let Ok(c) = parse_cache(&text) {
            if c.kind() == lat.kind && c.depth == depth {
                return Ok(c);
            }
        }
    }
    let c = enumerate_lattice(lat, depth)?;
    std::fs::create_dir_all(dir).map_err(|e| LatticeError::Io(e.to_string()))?;
    // Write then rename so concurrent readers never see a partial file.
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    std::fs::write(&tmp, format_cache(&c)).map_err(|e| LatticeError::Io(e.to_string()))?;
    std::fs::rename(&tmp, &path).map_err(|e| LatticeError::Io(e.to_string()))?;
    Ok(c)
}
