//! The graph of Sarkisov links between rational Mori fibre spaces, link words,
//! their classification, enumeration of irreducible factorization types and
//! rational point bookkeeping over finite fields.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::algebra::Field;
use crate::error::{Error, Result};
use crate::fibration::projective_points;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    P2,
    D5,
    D6,
    D8,
    C5,
    C6,
    C8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Base {
    Pt,
    Line,
}

impl Vertex {
    pub const ALL: [Vertex; 7] = [Vertex::P2, Vertex::D5, Vertex::D6, Vertex::D8, Vertex::C5, Vertex::C6, Vertex::C8];

    pub fn name(self) -> &'static str {
        match self {
            Vertex::P2 => "P2",
            Vertex::D5 => "D5",
            Vertex::D6 => "D6",
            Vertex::D8 => "D8",
            Vertex::C5 => "C5",
            Vertex::C6 => "C6",
            Vertex::C8 => "C8",
        }
    }

    /// Self-intersection of the canonical divisor.
    pub fn degree(self) -> u32 {
        match self {
            Vertex::P2 => 9,
            Vertex::D5 | Vertex::C5 => 5,
            Vertex::D6 | Vertex::C6 => 6,
            Vertex::D8 | Vertex::C8 => 8,
        }
    }

    pub fn base(self) -> Base {
        match self {
            Vertex::C5 | Vertex::C6 | Vertex::C8 => Base::Line,
            _ => Base::Pt,
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Vertex {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Vertex::ALL.into_iter().find(|v| v.name() == s).ok_or_else(|| Error::parse("vertex", format!("unknown vertex '{s}'")))
    }
}

impl Serialize for Vertex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum LinkType {
    I,
    #[serde(rename = "II-pt")]
    IIPt,
    #[serde(rename = "II-P1")]
    IIP1,
    III,
    IV,
}

/// A link. For `II-P1` a missing `d` stands for a free parameter; in the graph it
/// means that every `d ≥ 1` occurs. `dp` is set only for type II.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LinkEdge {
    pub kind: LinkType,
    pub from: Vertex,
    pub to: Vertex,
    pub d: Option<u32>,
    pub dp: Option<u32>,
}

impl LinkEdge {
    fn two(from: Vertex, to: Vertex, d: u32, dp: u32) -> Self {
        LinkEdge { kind: LinkType::IIPt, from, to, d: Some(d), dp: Some(dp) }
    }

    pub fn inverse(&self) -> LinkEdge {
        let kind = match self.kind {
            LinkType::I => LinkType::III,
            LinkType::III => LinkType::I,
            k => k,
        };
        let (d, dp) = match self.kind {
            LinkType::IIPt | LinkType::IIP1 => (self.dp, self.d),
            _ => (self.d, self.dp),
        };
        LinkEdge { kind, from: self.to, to: self.from, d, dp }
    }

    /// The arrow label, e.g. `2,1`, `I4`, `III4`, `IV`, `d,d`.
    pub fn label(&self) -> String {
        let n = |x: Option<u32>| x.map_or("d".to_string(), |v| v.to_string());
        match self.kind {
            LinkType::IIPt | LinkType::IIP1 => format!("{},{}", n(self.d), n(self.dp)),
            LinkType::I => format!("I{}", n(self.d)),
            LinkType::III => format!("III{}", n(self.d)),
            LinkType::IV => "IV".into(),
        }
    }
}

impl fmt::Display for LinkEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -{}-> {}", self.from, self.label(), self.to)
    }
}

impl Serialize for LinkEdge {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A path in the graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinkWord {
    pub start: Vertex,
    pub links: Vec<LinkEdge>,
}

impl LinkWord {
    pub fn empty(start: Vertex) -> Self {
        LinkWord { start, links: vec![] }
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn end(&self) -> Vertex {
        self.links.last().map_or(self.start, |l| l.to)
    }

    pub fn is_closed(&self) -> bool {
        self.end() == self.start
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        std::iter::once(self.start).chain(self.links.iter().map(|l| l.to)).collect()
    }

    pub fn reversed(&self) -> LinkWord {
        LinkWord { start: self.end(), links: self.links.iter().rev().map(LinkEdge::inverse).collect() }
    }

    /// Consecutive links share endpoints.
    pub fn chains(&self) -> bool {
        let mut at = self.start;
        for l in &self.links {
            if l.from != at {
                return false;
            }
            at = l.to;
        }
        true
    }
}

impl fmt::Display for LinkWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.start)?;
        for l in &self.links {
            write!(f, " -{}-> {}", l.label(), l.to)?;
        }
        Ok(())
    }
}

impl Serialize for LinkWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn parse_deg(s: &str) -> Result<Option<u32>> {
    if s == "d" {
        return Ok(None);
    }
    match s.parse::<u32>() {
        Ok(v) if v > 0 => Ok(Some(v)),
        _ => Err(Error::parse("link label", format!("bad orbit size '{s}'"))),
    }
}

impl FromStr for LinkWord {
    type Err = Error;

    /// Parses `P2 -2,1-> D8 -4,4-> D8 -1,2-> P2`.
    fn from_str(s: &str) -> Result<Self> {
        let toks: Vec<&str> = s.split_whitespace().collect();
        if toks.is_empty() || toks.len() % 2 == 0 {
            return Err(Error::parse("word", "expected vertex (arrow vertex)*"));
        }
        let start: Vertex = toks[0].parse()?;
        let mut links = Vec::new();
        let mut at = start;
        for pair in toks[1..].chunks(2) {
            let arrow = pair[0];
            let to: Vertex = pair[1].parse()?;
            let label = arrow
                .strip_prefix('-')
                .and_then(|a| a.strip_suffix("->"))
                .ok_or_else(|| Error::parse("word", format!("bad arrow '{arrow}'")))?;
            let link = if label == "IV" {
                LinkEdge { kind: LinkType::IV, from: at, to, d: None, dp: None }
            } else if let Some(d) = label.strip_prefix("III") {
                LinkEdge { kind: LinkType::III, from: at, to, d: parse_deg(d)?, dp: None }
            } else if let Some(d) = label.strip_prefix('I') {
                LinkEdge { kind: LinkType::I, from: at, to, d: parse_deg(d)?, dp: None }
            } else {
                let (a, b) = label.split_once(',').ok_or_else(|| Error::parse("word", format!("bad arrow '{arrow}'")))?;
                let kind = if at.base() == Base::Line && to.base() == Base::Line { LinkType::IIP1 } else { LinkType::IIPt };
                LinkEdge { kind, from: at, to, d: parse_deg(a)?, dp: parse_deg(b)? }
            };
            links.push(link);
            at = to;
        }
        Ok(LinkWord { start, links })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphMode {
    General,
    /// Fields with `[k̄ : k] = 2`: only orbits of size at most two.
    RealType,
}

#[derive(Clone, Debug)]
pub struct SarkisovGraph {
    pub mode: GraphMode,
    pub vertices: Vec<Vertex>,
    /// Directed edges; both directions of every non-loop edge are present.
    pub edges: Vec<LinkEdge>,
}

impl SarkisovGraph {
    pub fn standard(mode: GraphMode) -> Self {
        use Vertex::*;
        let mut edges = Vec::new();
        let mut both = |e: LinkEdge| {
            edges.push(e);
            if e.from != e.to || e.kind == LinkType::IIPt && e.d != e.dp {
                edges.push(e.inverse());
            }
        };
        for (a, b, d) in [(P2, D8, 2), (P2, D5, 5), (D8, D6, 3), (D8, D5, 5)] {
            both(LinkEdge::two(a, b, d, if (a, b) == (D8, D5) { 2 } else { 1 }));
        }
        for (v, ds) in [(P2, &[3u32, 6, 7, 8][..]), (D8, &[4, 6, 7][..]), (D6, &[2, 3, 4, 5][..]), (D5, &[3, 4][..])] {
            for &d in ds {
                both(LinkEdge::two(v, v, d, d));
            }
        }
        for (a, b, d) in [(P2, C8, 1), (P2, C5, 4), (D8, C6, 2)] {
            both(LinkEdge { kind: LinkType::I, from: a, to: b, d: Some(d), dp: None });
        }
        for v in [C8, C5, C6] {
            both(LinkEdge { kind: LinkType::IIP1, from: v, to: v, d: None, dp: None });
        }
        both(LinkEdge { kind: LinkType::IV, from: C8, to: C8, d: None, dp: None });
        let mut g = SarkisovGraph { mode, vertices: Vertex::ALL.to_vec(), edges };
        if mode == GraphMode::RealType {
            g.vertices = vec![P2, C8, D8, C6];
            let keep = g.vertices.clone();
            g.edges.retain(|e| keep.contains(&e.from) && keep.contains(&e.to) && e.d.is_none_or(|d| d <= 2) && e.dp.is_none_or(|d| d <= 2));
        }
        g
    }

    /// Whether a single link is an edge of the graph.
    pub fn has_link(&self, l: &LinkEdge) -> bool {
        if !self.vertices.contains(&l.from) || !self.vertices.contains(&l.to) {
            return false;
        }
        self.edges.iter().any(|e| {
            if e.kind != l.kind || e.from != l.from || e.to != l.to {
                return false;
            }
            match e.kind {
                LinkType::IIP1 => match (l.d, l.dp) {
                    (None, None) => true,
                    (Some(a), Some(b)) => a == b && (self.mode == GraphMode::General || a <= 2),
                    _ => false,
                },
                _ => e.d == l.d && e.dp == l.dp,
            }
        })
    }

    pub fn validate_word(&self, w: &LinkWord) -> bool {
        w.chains() && w.links.iter().all(|l| self.has_link(l))
    }

    /// The target of the type-II link from `v` blowing up a `d`-point, when one exists.
    pub fn target(&self, v: Vertex, d: u32) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = self.edges.iter().filter(|e| e.kind == LinkType::IIPt && e.from == v && e.d == Some(d)).map(|e| e.to).collect();
        out.dedup();
        out
    }

    /// Graph distances from `P2`, ignoring directions.
    pub fn distances(&self) -> BTreeMap<Vertex, usize> {
        let mut dist = BTreeMap::from([(Vertex::P2, 0)]);
        let mut queue = VecDeque::from([Vertex::P2]);
        while let Some(v) = queue.pop_front() {
            for e in self.edges.iter().filter(|e| e.from == v) {
                if !dist.contains_key(&e.to) {
                    dist.insert(e.to, dist[&v] + 1);
                    queue.push_back(e.to);
                }
            }
        }
        dist
    }

    /// Unimodality of a closed word: distances to `P2` rise by one on the first half,
    /// fall by one on the second, and stay put across the middle link of an odd word.
    pub fn is_unimodal(&self, w: &LinkWord) -> bool {
        let dist = self.distances();
        let vs = w.vertices();
        let m = w.len();
        let dv = |i: usize| dist.get(&vs[i]).copied().unwrap_or(usize::MAX) as i64;
        (1..=m).all(|i| {
            if 2 * i <= m {
                dv(i) == dv(i - 1) + 1
            } else if 2 * i == m + 1 {
                dv(i) == dv(i - 1)
            } else {
                dv(i) == dv(i - 1) - 1
            }
        })
    }

    pub fn classify_word(&self, w: &LinkWord) -> Result<Classification> {
        if !w.is_closed() || w.start != Vertex::P2 {
            return Err(Error::Invalid(format!("'{w}' is not a closed word at P2")));
        }
        if !self.validate_word(w) {
            return Err(Error::Invalid(format!("'{w}' is not a path in the graph")));
        }
        let contains_type_iv = w.links.iter().any(|l| l.kind == LinkType::IV);
        let iii_after_i = w.links.windows(2).any(|p| p[0].kind == LinkType::I && p[1].kind == LinkType::III);
        let vs = w.vertices();
        let revisits_p2 = vs.len() > 2 && vs[1..vs.len() - 1].contains(&Vertex::P2);
        let unimodal = self.is_unimodal(w);
        let kind = if w.is_empty() {
            WordKind::Automorphism
        } else if vs.iter().any(|v| v.base() == Base::Line) {
            WordKind::Fibering
        } else {
            WordKind::DelPezzo
        };
        let table_row = TABLE_ROWS.iter().position(|(s, _)| s.parse::<LinkWord>().is_ok_and(|r| r == *w));
        let shape = fibering_shape(w);
        let candidate = !w.is_empty()
            && !contains_type_iv
            && !iii_after_i
            && !revisits_p2
            && match kind {
                WordKind::DelPezzo => unimodal,
                WordKind::Fibering => shape.is_some(),
                WordKind::Automorphism => false,
            };
        Ok(Classification {
            word: w.clone(),
            sl: w.len(),
            contains_type_iv,
            iii_after_i,
            revisits_p2,
            unimodal,
            kind,
            table_row: table_row.map(|i| TableRow { index: i, note: TABLE_ROWS[i].1 }),
            shape,
            minimal_irreducible_candidate: candidate,
        })
    }

    /// All closed words at `P2` of length at most `max_sl` that pass the necessary conditions
    /// for minimal factorizations of irreducible maps. This is a catalog of admissible types;
    /// it does not claim that each type is realized.
    pub fn enumerate_irreducible_types(&self, max_sl: usize) -> Result<Enumeration> {
        if max_sl > 8 {
            return Err(Error::Hypothesis("max_sl is limited to 8".into()));
        }
        let mut found = Vec::new();
        let mut stack = vec![LinkWord::empty(Vertex::P2)];
        while let Some(w) = stack.pop() {
            if !w.is_empty() && w.is_closed() {
                let c = self.classify_word(&w)?;
                if c.minimal_irreducible_candidate {
                    found.push(w);
                }
                continue;
            }
            if w.len() == max_sl {
                continue;
            }
            for e in self.edges.iter().filter(|e| e.from == w.end() && e.kind != LinkType::IV) {
                if w.links.last().is_some_and(|l| l.kind == LinkType::I && e.kind == LinkType::III) {
                    continue;
                }
                let mut next = w.clone();
                next.links.push(*e);
                stack.push(next);
            }
        }
        found.sort_by(|a, b| (a.len(), a.to_string()).cmp(&(b.len(), b.to_string())));
        let (fibering, del_pezzo): (Vec<LinkWord>, Vec<LinkWord>) = found.into_iter().partition(|w| w.vertices().iter().any(|v| v.base() == Base::Line));
        Ok(Enumeration { del_pezzo, fibering })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WordKind {
    Automorphism,
    DelPezzo,
    Fibering,
}

/// The fibering shapes: (a) through Hirzebruch surfaces with `r` type II links,
/// (b) through `C5`, (c) through `D8` and `C6`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum FiberingShape {
    A { r: usize },
    B,
    C,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub index: usize,
    pub note: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub word: LinkWord,
    pub sl: usize,
    pub contains_type_iv: bool,
    pub iii_after_i: bool,
    pub revisits_p2: bool,
    pub unimodal: bool,
    pub kind: WordKind,
    pub table_row: Option<TableRow>,
    pub shape: Option<FiberingShape>,
    pub minimal_irreducible_candidate: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Enumeration {
    pub del_pezzo: Vec<LinkWord>,
    pub fibering: Vec<LinkWord>,
}

/// The Del Pezzo factorization types of irreducible maps, by length, with the way
/// each one is handled later on.
pub const TABLE_ROWS: [(&str, &str); 18] = [
    ("P2 -3,3-> P2", "quadratic simplification"),
    ("P2 -6,6-> P2", "P2 (6,6) loop"),
    ("P2 -7,7-> P2", "Geiser simplification"),
    ("P2 -8,8-> P2", "Bertini simplification"),
    ("P2 -2,1-> D8 -1,2-> P2", "quadratic simplification"),
    ("P2 -5,1-> D5 -1,5-> P2", "through D5"),
    ("P2 -2,1-> D8 -4,4-> D8 -1,2-> P2", "D8 (4,4) loop"),
    ("P2 -2,1-> D8 -6,6-> D8 -1,2-> P2", "Geiser simplification"),
    ("P2 -2,1-> D8 -7,7-> D8 -1,2-> P2", "Bertini simplification"),
    ("P2 -5,1-> D5 -3,3-> D5 -1,5-> P2", "Geiser simplification"),
    ("P2 -5,1-> D5 -4,4-> D5 -1,5-> P2", "Bertini simplification"),
    ("P2 -5,1-> D5 -2,5-> D8 -1,2-> P2", "D5 to D8 loop"),
    ("P2 -2,1-> D8 -5,2-> D5 -1,5-> P2", "inverse of the previous one"),
    ("P2 -2,1-> D8 -3,1-> D6 -1,3-> D8 -1,2-> P2", "through D6"),
    ("P2 -2,1-> D8 -3,1-> D6 -2,2-> D6 -1,3-> D8 -1,2-> P2", "D6 (2,2) loop"),
    ("P2 -2,1-> D8 -3,1-> D6 -3,3-> D6 -1,3-> D8 -1,2-> P2", "D6 (3,3) loop"),
    ("P2 -2,1-> D8 -3,1-> D6 -4,4-> D6 -1,3-> D8 -1,2-> P2", "Geiser simplification"),
    ("P2 -2,1-> D8 -3,1-> D6 -5,5-> D6 -1,3-> D8 -1,2-> P2", "Bertini simplification"),
];

pub fn table_words() -> Vec<LinkWord> {
    TABLE_ROWS.iter().map(|(s, _)| s.parse().expect("table rows parse")).collect()
}

fn fibering_shape(w: &LinkWord) -> Option<FiberingShape> {
    use Vertex::*;
    let ls = &w.links;
    let n = ls.len();
    if n < 3 {
        return None;
    }
    let is = |l: &LinkEdge, k: LinkType, from: Vertex, to: Vertex| l.kind == k && l.from == from && l.to == to;
    if is(&ls[0], LinkType::I, P2, C8) && is(&ls[n - 1], LinkType::III, C8, P2) && ls[1..n - 1].iter().all(|l| l.kind == LinkType::IIP1) {
        return Some(FiberingShape::A { r: n - 2 });
    }
    if n == 3 && is(&ls[0], LinkType::I, P2, C5) && ls[1].kind == LinkType::IIP1 && is(&ls[2], LinkType::III, C5, P2) {
        return Some(FiberingShape::B);
    }
    if n == 5
        && is(&ls[0], LinkType::IIPt, P2, D8)
        && is(&ls[1], LinkType::I, D8, C6)
        && ls[2].kind == LinkType::IIP1
        && is(&ls[3], LinkType::III, C6, D8)
        && is(&ls[4], LinkType::IIPt, D8, P2)
    {
        return Some(FiberingShape::C);
    }
    None
}

/// Counts of rational points at each vertex of a word through `P2` and Del Pezzo
/// classes over `F_q`: blowing up a rational point adds `q`, larger orbits add nothing.
pub fn point_count_along(w: &LinkWord, q: u64) -> Result<Vec<u64>> {
    if !w.chains() {
        return Err(Error::Invalid(format!("'{w}' does not chain")));
    }
    if w.vertices().iter().any(|v| v.base() == Base::Line) || w.links.iter().any(|l| l.kind != LinkType::IIPt) {
        return Err(Error::Hypothesis("point counts are tracked only along type II links between Del Pezzo classes".into()));
    }
    let q = q as i128;
    let mut count = q * q + q + 1;
    let mut out = Vec::with_capacity(w.len() + 1);
    let check = |v: Vertex, c: i128| -> Result<u64> {
        let want = match v {
            Vertex::P2 => q * q + q + 1,
            Vertex::D8 | Vertex::D5 => q * q + 1,
            Vertex::D6 => q * q - q + 1,
            _ => unreachable!(),
        };
        if c != want || c < 3 {
            return Err(Error::Verification(format!("count {c} at {v} differs from {want}")));
        }
        Ok(c as u64)
    };
    if w.start != Vertex::P2 {
        return Err(Error::Hypothesis("words start at P2".into()));
    }
    out.push(check(w.start, count)?);
    for l in &w.links {
        let (d, dp) = (l.d.unwrap_or(0), l.dp.unwrap_or(0));
        count += if d == 1 { q } else { 0 };
        count -= if dp == 1 { q } else { 0 };
        out.push(check(l.to, count)?);
    }
    Ok(out)
}

/// `|P^2(F_q)|` by listing the points of the plane.
pub fn projective_plane_count(field: &Field) -> Result<u64> {
    let elems = field.elements(1 << 12)?;
    Ok(projective_points(field, &elems).len() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g() -> SarkisovGraph {
        SarkisovGraph::standard(GraphMode::General)
    }

    #[test]
    fn shape_of_the_graph() {
        let g = g();
        assert_eq!(g.vertices.len(), 7);
        let mut d8: Vec<u32> = g.edges.iter().filter(|e| e.from == Vertex::D8 && e.to == Vertex::D8).filter_map(|e| e.d).collect();
        d8.sort();
        assert_eq!(d8, vec![4, 6, 7]);
        let r = SarkisovGraph::standard(GraphMode::RealType);
        assert_eq!(r.vertices, vec![Vertex::P2, Vertex::C8, Vertex::D8, Vertex::C6]);
        for v in Vertex::ALL {
            for d in 1..=8 {
                assert!(g.target(v, d).len() <= 1);
            }
        }
    }

    #[test]
    fn word_validation() {
        let g = g();
        assert!(g.validate_word(&"P2 -2,1-> D8 -1,2-> P2".parse().unwrap()));
        assert!(!g.validate_word(&"P2 -4,4-> P2".parse().unwrap()));
        assert!(g.validate_word(&LinkWord::empty(Vertex::P2)));
        let w: LinkWord = "P2 -I4-> C5 -d,d-> C5 -III4-> P2".parse().unwrap();
        assert_eq!(w.to_string(), "P2 -I4-> C5 -d,d-> C5 -III4-> P2");
        assert!(g.validate_word(&w));
    }

    #[test]
    fn classification_examples() {
        let g = g();
        let c = g.classify_word(&"P2 -2,1-> D8 -4,4-> D8 -1,2-> P2".parse().unwrap()).unwrap();
        assert_eq!((c.kind, c.sl, c.table_row.unwrap().note), (WordKind::DelPezzo, 3, "D8 (4,4) loop"));
        let c = g.classify_word(&"P2 -I4-> C5 -3,3-> C5 -III4-> P2".parse().unwrap()).unwrap();
        assert_eq!((c.kind, c.shape, c.sl), (WordKind::Fibering, Some(FiberingShape::B), 3));
        let c = g.classify_word(&"P2 -I1-> C8 -1,1-> C8 -IV-> C8 -1,1-> C8 -III1-> P2".parse().unwrap()).unwrap();
        assert!(c.contains_type_iv && !c.minimal_irreducible_candidate);
        assert!(g.classify_word(&"P2 -2,1-> D8".parse().unwrap()).is_err());
    }

    #[test]
    fn enumeration_reproduces_the_table() {
        let g = g();
        let e = g.enumerate_irreducible_types(5).unwrap();
        let mut want = table_words();
        want.sort_by_key(|w| (w.len(), w.to_string()));
        assert_eq!(e.del_pezzo, want);
        let mut by_len = [0; 6];
        for w in &e.del_pezzo {
            by_len[w.len()] += 1;
        }
        assert_eq!(by_len, [0, 4, 2, 7, 1, 4]);
        let shapes: Vec<FiberingShape> = e.fibering.iter().map(|w| fibering_shape(w).unwrap()).collect();
        assert_eq!(shapes.len(), 5);
        for s in [FiberingShape::A { r: 1 }, FiberingShape::A { r: 2 }, FiberingShape::A { r: 3 }, FiberingShape::B, FiberingShape::C] {
            assert!(shapes.contains(&s));
        }
        for w in e.del_pezzo.iter().chain(&e.fibering) {
            assert!(g.validate_word(w));
            assert!(e.del_pezzo.contains(&w.reversed()) || e.fibering.contains(&w.reversed()));
        }
        let one = g.enumerate_irreducible_types(1).unwrap();
        assert_eq!(one.del_pezzo.len(), 4);
        assert!(one.fibering.is_empty());
    }

    #[test]
    fn point_counts() {
        let f2 = Field::prime_field(2).unwrap();
        assert_eq!(projective_plane_count(&f2).unwrap(), 7);
        assert_eq!(point_count_along(&"P2 -2,1-> D8".parse().unwrap(), 3).unwrap(), vec![13, 10]);
        assert_eq!(point_count_along(&"P2 -2,1-> D8 -3,1-> D6".parse().unwrap(), 2).unwrap(), vec![7, 5, 3]);
        assert!(point_count_along(&"P2 -I4-> C5".parse().unwrap(), 2).is_err());
    }
}
