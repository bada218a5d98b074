//! Core domain types: alternatives, permutations, preferences, decisions,
//! spaces, profiles, histograms, and the lexicographic priority order.
//!
//! Alternatives are the integers `1..=m`. A preference (or decision) is
//! either an ordered list of distinct alternatives or an unordered committee;
//! both carry their size implicitly. Spaces describe which preferences are
//! admissible: all ℓ-lists, all ℓ-committees, or the up-to-L unions of those.
//!
//! The priority order ⊳ defaults to `1 ≻ 2 ≻ ⋯ ≻ m` and extends
//! lexicographically to lists, committees, and histograms. For up-to-L
//! spaces we order the size classes ascending (all 1-element preferences
//! before all 2-element ones, and so on); the base theory leaves the order
//! between size classes free, and ascending size is the concrete choice made
//! throughout this crate.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::{Error, Result};

/// An alternative, `1..=m`. Kept as a bare integer; validity is enforced by
/// the types that contain it.
pub type Alt = u8;

/// Hard cap on `m` for algorithms that scan all of S_m or enumerate full
/// list spaces (both grow like m!). Spaces and settings themselves allow
/// larger `m` (committee spaces and the closed-form existence analyses stay
/// tractable well beyond it).
pub const MAX_M: usize = 8;

/// Absolute cap on `m` for any space or permutation.
pub const MAX_ALTERNATIVES: usize = 32;

// ---------------------------------------------------------------------------
// Permutations
// ---------------------------------------------------------------------------

/// A permutation of `1..=m`, stored as its image table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    /// `img[a-1]` is the image of alternative `a`.
    img: Vec<Alt>,
}

impl Perm {
    /// The identity permutation on `1..=m`.
    pub fn identity(m: usize) -> Self {
        Perm {
            img: (1..=m as Alt).collect(),
        }
    }

    /// Builds a permutation from an image table (`img[a-1] = σ(a)`).
    pub fn from_images(img: Vec<Alt>) -> Result<Self> {
        let m = img.len();
        if m == 0 || m > MAX_ALTERNATIVES {
            return Err(Error::Invalid(format!("m must be in 1..={MAX_ALTERNATIVES}")));
        }
        let mut seen = vec![false; m];
        for &a in &img {
            if a == 0 || a as usize > m || seen[a as usize - 1] {
                return Err(Error::Invalid(format!("not a bijection on 1..={m}")));
            }
            seen[a as usize - 1] = true;
        }
        Ok(Perm { img })
    }

    /// Parses cycle form, e.g. `"(1,3)(2,4)"`; the identity is `"()"`.
    /// Alternatives not mentioned are fixed.
    pub fn from_cycles(s: &str, m: usize) -> Result<Self> {
        if m == 0 || m > MAX_ALTERNATIVES {
            return Err(Error::Invalid(format!("m must be in 1..={MAX_ALTERNATIVES}")));
        }
        let mut img: Vec<Alt> = (1..=m as Alt).collect();
        let s = s.trim();
        if !s.starts_with('(') || !s.ends_with(')') {
            return Err(Error::Parse(format!("bad cycle form: {s:?}")));
        }
        for cycle in s[1..s.len() - 1].split(")(") {
            let cycle = cycle.trim();
            if cycle.is_empty() {
                continue; // "()" — identity
            }
            let alts: Vec<Alt> = cycle
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<Alt>()
                        .map_err(|_| Error::Parse(format!("bad cycle element {t:?}")))
                })
                .collect::<Result<_>>()?;
            for w in alts.windows(2) {
                img[w[0] as usize - 1] = w[1];
            }
            if alts.len() > 1 {
                img[*alts.last().unwrap() as usize - 1] = alts[0];
            }
        }
        Perm::from_images(img)
    }

    pub fn m(&self) -> usize {
        self.img.len()
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(i, &a)| a as usize == i + 1)
    }

    /// σ(a).
    #[inline]
    pub fn apply_alt(&self, a: Alt) -> Alt {
        self.img[a as usize - 1]
    }

    /// The composition `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.m(), other.m());
        Perm {
            img: other.img.iter().map(|&a| self.apply_alt(a)).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut img = vec![0; self.m()];
        for (i, &a) in self.img.iter().enumerate() {
            img[a as usize - 1] = (i + 1) as Alt;
        }
        Perm { img }
    }

    /// Element-wise application to a preference. Committee images are
    /// re-normalized to sorted order.
    pub fn apply_pref(&self, p: &Pref) -> Pref {
        match p {
            Pref::List(v) => Pref::List(v.iter().map(|&a| self.apply_alt(a)).collect()),
            Pref::Committee(v) => {
                let mut w: Vec<Alt> = v.iter().map(|&a| self.apply_alt(a)).collect();
                w.sort_unstable();
                Pref::Committee(w)
            }
        }
    }

    /// All of S_m in a fixed (lexicographic image) order.
    pub fn all(m: usize) -> Vec<Perm> {
        use itertools::Itertools;
        assert!((1..=MAX_M).contains(&m), "m must be in 1..={MAX_M}");
        (1..=m as Alt)
            .permutations(m)
            .map(|img| Perm { img })
            .collect()
    }
}

impl fmt::Display for Perm {
    /// Cycle form, fixed points omitted; identity prints as `"()"`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.m();
        let mut seen = vec![false; m];
        let mut out = String::new();
        for start in 1..=m as Alt {
            if seen[start as usize - 1] || self.apply_alt(start) == start {
                continue;
            }
            out.push('(');
            let mut a = start;
            loop {
                seen[a as usize - 1] = true;
                out.push_str(&a.to_string());
                a = self.apply_alt(a);
                if a == start {
                    break;
                }
                out.push(',');
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

// ---------------------------------------------------------------------------
// Preferences and decisions
// ---------------------------------------------------------------------------

/// A preference or decision: an ordered list or an unordered committee of
/// distinct alternatives. Committees keep their elements sorted.
///
/// The derived-order contract: `Ord` compares size first, then the payload
/// lexicographically. Within a fixed-size space this is exactly the
/// lexicographic extension of the default priority order `1 ≻ ⋯ ≻ m`, and
/// across sizes it realizes the ascending-size class order used for up-to-L
/// spaces. Higher priority ⇔ smaller under `Ord`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Pref {
    List(Vec<Alt>),
    Committee(Vec<Alt>),
}

impl Pref {
    pub fn list(v: Vec<Alt>) -> Self {
        Pref::List(v)
    }

    pub fn committee(mut v: Vec<Alt>) -> Self {
        v.sort_unstable();
        Pref::Committee(v)
    }

    pub fn size(&self) -> usize {
        match self {
            Pref::List(v) | Pref::Committee(v) => v.len(),
        }
    }

    pub fn alts(&self) -> &[Alt] {
        match self {
            Pref::List(v) | Pref::Committee(v) => v,
        }
    }

    pub fn is_list(&self) -> bool {
        matches!(self, Pref::List(_))
    }

    /// Parses `"1>3>2"` (list) or `"{1,3}"` (committee). A single number is a
    /// 1-list.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            if !s.ends_with('}') {
                return Err(Error::Parse(format!("unterminated committee: {s:?}")));
            }
            let alts = parse_alt_seq(&s[1..s.len() - 1], ",")?;
            Ok(Pref::committee(alts))
        } else {
            Ok(Pref::List(parse_alt_seq(s, ">")?))
        }
    }
}

fn parse_alt_seq(s: &str, sep: &str) -> Result<Vec<Alt>> {
    let alts: Vec<Alt> = s
        .split(sep)
        .map(|t| {
            t.trim()
                .parse::<Alt>()
                .map_err(|_| Error::Parse(format!("bad alternative {t:?}")))
        })
        .collect::<Result<_>>()?;
    if alts.is_empty() || alts.contains(&0) {
        return Err(Error::Parse(format!("bad preference {s:?}")));
    }
    let mut dedup = alts.clone();
    dedup.sort_unstable();
    dedup.dedup();
    if dedup.len() != alts.len() {
        return Err(Error::Parse(format!("duplicate alternative in {s:?}")));
    }
    Ok(alts)
}

impl Ord for Pref {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Pref::List(a), Pref::List(b)) | (Pref::Committee(a), Pref::Committee(b)) => {
                a.len().cmp(&b.len()).then_with(|| a.cmp(b))
            }
            // Never compared in practice — spaces are homogeneous — but keep
            // the order total.
            (Pref::List(_), Pref::Committee(_)) => Ordering::Less,
            (Pref::Committee(_), Pref::List(_)) => Ordering::Greater,
        }
    }
}

impl PartialOrd for Pref {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Pref {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pref::List(v) => {
                let parts: Vec<String> = v.iter().map(|a| a.to_string()).collect();
                f.write_str(&parts.join(">"))
            }
            Pref::Committee(v) => {
                let parts: Vec<String> = v.iter().map(|a| a.to_string()).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
        }
    }
}

impl fmt::Debug for Pref {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

// ---------------------------------------------------------------------------
// Spaces and settings
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum SpaceKind {
    List,
    Committee,
}

/// A preference or decision space: all lists or committees over `1..=m` with
/// sizes in `min_size..=max_size`. Exact-size spaces have `min == max`;
/// up-to-L spaces have `min == 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Space {
    pub m: usize,
    pub kind: SpaceKind,
    pub min_size: usize,
    pub max_size: usize,
}

impl Space {
    fn new(m: usize, kind: SpaceKind, min_size: usize, max_size: usize) -> Result<Self> {
        if !(1..=MAX_ALTERNATIVES).contains(&m) {
            return Err(Error::Invalid(format!(
                "m={m} out of range 1..={MAX_ALTERNATIVES}"
            )));
        }
        if min_size < 1 || min_size > max_size || max_size > m {
            return Err(Error::Invalid(format!(
                "size range {min_size}..={max_size} invalid for m={m}"
            )));
        }
        Ok(Space {
            m,
            kind,
            min_size,
            max_size,
        })
    }

    /// All ℓ-lists over `1..=m`.
    pub fn lists(m: usize, l: usize) -> Result<Self> {
        Space::new(m, SpaceKind::List, l, l)
    }

    /// All ℓ-committees over `1..=m`.
    pub fn committees(m: usize, l: usize) -> Result<Self> {
        Space::new(m, SpaceKind::Committee, l, l)
    }

    /// Lists of every size `1..=L`.
    pub fn lists_up_to(m: usize, l: usize) -> Result<Self> {
        Space::new(m, SpaceKind::List, 1, l)
    }

    /// Committees of every size `1..=L`.
    pub fn committees_up_to(m: usize, l: usize) -> Result<Self> {
        Space::new(m, SpaceKind::Committee, 1, l)
    }

    /// Full rankings (m-lists).
    pub fn full_rankings(m: usize) -> Result<Self> {
        Space::lists(m, m)
    }

    pub fn is_exact(&self) -> bool {
        self.min_size == self.max_size
    }

    pub fn is_full_ranking(&self) -> bool {
        self.kind == SpaceKind::List && self.is_exact() && self.max_size == self.m
    }

    /// Number of elements.
    pub fn len(&self) -> usize {
        (self.min_size..=self.max_size)
            .map(|s| match self.kind {
                SpaceKind::List => falling_factorial(self.m, s),
                SpaceKind::Committee => binomial(self.m, s),
            })
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        false // size range is validated non-empty
    }

    pub fn contains(&self, p: &Pref) -> bool {
        let kind_ok = matches!(
            (self.kind, p),
            (SpaceKind::List, Pref::List(_)) | (SpaceKind::Committee, Pref::Committee(_))
        );
        kind_ok
            && p.size() >= self.min_size
            && p.size() <= self.max_size
            && p.alts().iter().all(|&a| a >= 1 && a as usize <= self.m)
    }

    /// All elements, sorted by the default priority order (ascending size,
    /// then lexicographic).
    pub fn enumerate(&self) -> Vec<Pref> {
        use itertools::Itertools;
        let mut out = Vec::with_capacity(self.len());
        for s in self.min_size..=self.max_size {
            match self.kind {
                SpaceKind::List => {
                    out.extend((1..=self.m as Alt).permutations(s).map(Pref::List));
                }
                SpaceKind::Committee => {
                    out.extend((1..=self.m as Alt).combinations(s).map(Pref::Committee));
                }
            }
        }
        out.sort_unstable();
        out
    }
}

fn falling_factorial(m: usize, k: usize) -> usize {
    (m - k + 1..=m).product()
}

fn binomial(m: usize, k: usize) -> usize {
    if k > m {
        return 0;
    }
    let mut r = 1usize;
    for i in 0..k {
        r = r * (m - i) / (i + 1);
    }
    r
}

/// A (preference space, decision space) pair. Decision spaces are always
/// exact-size.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Setting {
    pub pref_space: Space,
    pub dec_space: Space,
}

impl Setting {
    pub fn new(pref_space: Space, dec_space: Space) -> Result<Self> {
        if pref_space.m != dec_space.m {
            return Err(Error::Invalid("pref/dec spaces disagree on m".into()));
        }
        if !dec_space.is_exact() {
            return Err(Error::Invalid("decision spaces must be exact-size".into()));
        }
        Ok(Setting {
            pref_space,
            dec_space,
        })
    }

    pub fn m(&self) -> usize {
        self.pref_space.m
    }

    /// Parses `"L2>L1"`, `"C<=5>L1"`, `"Lm>Cm"`, … given `m`. The left side
    /// is the preference space, the right side the decision space; `m` may be
    /// used as a size placeholder.
    pub fn parse(s: &str, m: usize) -> Result<Self> {
        // The separator is the single '>' that is not part of a "<=": split
        // on the last '>'.
        let idx = s
            .rfind('>')
            .ok_or_else(|| Error::Parse(format!("setting {s:?} lacks '>'")))?;
        let (left, right) = (&s[..idx], &s[idx + 1..]);
        let pref_space = parse_space(left, m)?;
        let dec_space = parse_space(right, m)?;
        if !dec_space.is_exact() {
            return Err(Error::Parse(format!(
                "decision space in {s:?} must be exact-size"
            )));
        }
        Setting::new(pref_space, dec_space)
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}>{}", space_str(&self.pref_space), space_str(&self.dec_space))
    }
}

fn space_str(s: &Space) -> String {
    let kind = match s.kind {
        SpaceKind::List => "L",
        SpaceKind::Committee => "C",
    };
    if s.is_exact() {
        format!("{kind}{}", s.max_size)
    } else {
        format!("{kind}<={}", s.max_size)
    }
}

fn parse_space(s: &str, m: usize) -> Result<Space> {
    let s = s.trim();
    let (kind, rest) = match s.chars().next() {
        Some('L') => (SpaceKind::List, &s[1..]),
        Some('C') => (SpaceKind::Committee, &s[1..]),
        _ => return Err(Error::Parse(format!("space {s:?} must start with L or C"))),
    };
    let (up_to, size_str) = match rest.strip_prefix("<=") {
        Some(r) => (true, r),
        None => (false, rest),
    };
    let size = if size_str.trim() == "m" {
        m
    } else {
        size_str
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("bad space size {size_str:?}")))?
    };
    if up_to {
        match kind {
            SpaceKind::List => Space::lists_up_to(m, size),
            SpaceKind::Committee => Space::committees_up_to(m, size),
        }
    } else {
        match kind {
            SpaceKind::List => Space::lists(m, size),
            SpaceKind::Committee => Space::committees(m, size),
        }
    }
}

// ---------------------------------------------------------------------------
// Profiles and histograms
// ---------------------------------------------------------------------------

/// An ordered sequence of votes, all from the same space.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Profile {
    pub votes: Vec<Pref>,
}

impl Profile {
    pub fn new(votes: Vec<Pref>) -> Result<Self> {
        if votes.is_empty() {
            return Err(Error::Invalid("profile must contain at least one vote".into()));
        }
        let all_lists = votes.iter().all(Pref::is_list);
        let all_committees = votes.iter().all(|v| !v.is_list());
        if !all_lists && !all_committees {
            return Err(Error::Invalid("profile mixes lists and committees".into()));
        }
        Ok(Profile { votes })
    }

    pub fn n(&self) -> usize {
        self.votes.len()
    }

    /// The anonymized profile: vote multiplicities, order discarded.
    pub fn histogram(&self) -> Histogram {
        let mut counts = BTreeMap::new();
        for v in &self.votes {
            *counts.entry(v.clone()).or_insert(0u64) += 1;
        }
        Histogram { counts }
    }

    pub fn apply(&self, sigma: &Perm) -> Profile {
        Profile {
            votes: self.votes.iter().map(|v| sigma.apply_pref(v)).collect(),
        }
    }

    /// Parses the profile file format: UTF-8, one vote per line, `#` starts a
    /// comment, and an optional `COUNT x VOTE` multiplicity prefix.
    pub fn parse(text: &str) -> Result<Self> {
        let mut votes = Vec::new();
        for line in text.lines() {
            let line = match line.find('#') {
                Some(i) => &line[..i],
                None => line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (count, vote_str) = match line.split_once(" x ") {
                Some((c, v)) => (
                    c.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad multiplicity in {line:?}")))?,
                    v,
                ),
                None => (1, line),
            };
            let vote = Pref::parse(vote_str)?;
            votes.extend(std::iter::repeat_n(vote, count));
        }
        Profile::new(votes)
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.votes {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// A sparse multiplicity map over preferences. Keys are stored in the default
/// priority order; zero counts are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Histogram {
    counts: BTreeMap<Pref, u64>,
}

impl Histogram {
    pub fn from_counts(counts: BTreeMap<Pref, u64>) -> Self {
        let counts = counts.into_iter().filter(|&(_, c)| c > 0).collect();
        Histogram { counts }
    }

    pub fn n(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn count(&self, p: &Pref) -> u64 {
        self.counts.get(p).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Pref, u64)> {
        self.counts.iter().map(|(p, &c)| (p, c))
    }

    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    /// A representative profile with votes in default priority order.
    pub fn to_profile(&self) -> Profile {
        let votes = self
            .counts
            .iter()
            .flat_map(|(p, &c)| std::iter::repeat_n(p.clone(), c as usize))
            .collect();
        Profile { votes }
    }

    /// The image histogram: the new count of `σ(R)` is the old count of `R`.
    pub fn apply(&self, sigma: &Perm) -> Histogram {
        Histogram {
            counts: self
                .counts
                .iter()
                .map(|(p, &c)| (sigma.apply_pref(p), c))
                .collect(),
        }
    }

    /// True iff `σ(h) = h`, without materializing the image.
    pub fn fixed_by(&self, sigma: &Perm) -> bool {
        self.counts
            .iter()
            .all(|(p, &c)| self.count(&sigma.apply_pref(p)) == c)
    }

    /// Adds `extra` copies of every element of `space` (used by the
    /// canceling-out checker).
    pub fn saturate(&self, space: &Space, extra: u64) -> Histogram {
        let mut counts = self.counts.clone();
        for p in space.enumerate() {
            *counts.entry(p).or_insert(0) += extra;
        }
        Histogram { counts }
    }
}

// ---------------------------------------------------------------------------
// Priority order
// ---------------------------------------------------------------------------

/// The priority order ⊳: a full ranking over `1..=m`, highest priority first.
/// It extends to preferences lexicographically and to histograms
/// coordinate-wise (more important coordinates first, larger counts
/// preferred).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PriorityOrder {
    base: Vec<Alt>,
    /// `rank[a-1]` = 1-based priority rank of `a` (1 = highest).
    rank: Vec<Alt>,
}

impl PriorityOrder {
    /// The default `1 ≻ 2 ≻ ⋯ ≻ m`.
    pub fn default_for(m: usize) -> Self {
        PriorityOrder::from_ranking(&(1..=m as Alt).collect::<Vec<_>>()).unwrap()
    }

    /// Priority induced by a full ranking (first element = highest priority).
    pub fn from_ranking(base: &[Alt]) -> Result<Self> {
        let m = base.len();
        Perm::from_images(base.to_vec())?; // validates bijection
        let mut rank = vec![0; m];
        for (i, &a) in base.iter().enumerate() {
            rank[a as usize - 1] = (i + 1) as Alt;
        }
        Ok(PriorityOrder {
            base: base.to_vec(),
            rank,
        })
    }

    pub fn m(&self) -> usize {
        self.base.len()
    }

    /// The base ranking as a list (highest priority first).
    pub fn base(&self) -> &[Alt] {
        &self.base
    }

    /// The permutation that maps the i-th ranked alternative to `i`; applying
    /// it to any object re-expresses that object in priority coordinates.
    pub fn to_perm(&self) -> Perm {
        Perm {
            img: self.rank.clone(),
        }
    }

    /// 1-based priority rank of `a` (1 = highest).
    #[inline]
    pub fn rank(&self, a: Alt) -> Alt {
        self.rank[a as usize - 1]
    }

    fn key(&self, p: &Pref) -> Pref {
        self.to_perm().apply_pref(p)
    }

    /// Compares two preferences; `Ordering::Greater` means `x` has higher
    /// priority (`x ⊳ y`).
    pub fn cmp_prefs(&self, x: &Pref, y: &Pref) -> Ordering {
        self.key(y).cmp(&self.key(x))
    }

    /// The highest-priority element of a nonempty collection.
    pub fn best<'a, I: IntoIterator<Item = &'a Pref>>(&self, iter: I) -> Option<Pref> {
        iter.into_iter().min_by_key(|p| self.key(p)).cloned()
    }

    /// Compares two histograms; `Ordering::Greater` means `x ⊳ y` (larger
    /// count in the most important coordinate where they differ).
    pub fn cmp_histograms(&self, x: &Histogram, y: &Histogram) -> Ordering {
        let mut xs: Vec<(Pref, u64)> = x.iter().map(|(p, c)| (self.key(p), c)).collect();
        let mut ys: Vec<(Pref, u64)> = y.iter().map(|(p, c)| (self.key(p), c)).collect();
        xs.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        ys.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        let (mut i, mut j) = (0, 0);
        while i < xs.len() || j < ys.len() {
            let (cx, cy) = match (xs.get(i), ys.get(j)) {
                (Some(a), Some(b)) => match a.0.cmp(&b.0) {
                    Ordering::Less => (a.1, 0),
                    Ordering::Greater => (0, b.1),
                    Ordering::Equal => (a.1, b.1),
                },
                (Some(a), None) => (a.1, 0),
                (None, Some(b)) => (0, b.1),
                (None, None) => unreachable!(),
            };
            if cx != cy {
                return cx.cmp(&cy);
            }
            // advance whichever side supplied the shared coordinate
            match (xs.get(i), ys.get(j)) {
                (Some(a), Some(b)) => match a.0.cmp(&b.0) {
                    Ordering::Less => i += 1,
                    Ordering::Greater => j += 1,
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                    }
                },
                (Some(_), None) => i += 1,
                (None, Some(_)) => j += 1,
                (None, None) => unreachable!(),
            }
        }
        Ordering::Equal
    }
}

#[cfg(test)]
pub(crate) use tests::{profile_minus, profile_plus};
