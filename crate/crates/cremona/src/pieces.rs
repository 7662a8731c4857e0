//! The catalog of elementary relations between Sarkisov links: the 27 polygons
//! attached to Del Pezzo surfaces of Picard rank 3 over a point, plus the
//! square relations between conic bundles.
//!
//! Each boundary is stored as a closed link word and checked against the
//! standard graph when the catalog is loaded.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Base, GraphMode, LinkEdge, LinkType, LinkWord, SarkisovGraph, Vertex};

const CATALOG: &str = include_str!("../data/pieces.txt");

/// `<X,a,b>`: the blow-up of an `a`-point and a `b`-point on `X`, or `<F0,a>`:
/// the blow-up of an `a`-point on the quadric surface.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PieceName {
    pub root: String,
    pub a: u32,
    pub b: Option<u32>,
}

impl PieceName {
    pub fn root_degree(&self) -> u32 {
        match self.root.as_str() {
            "P2" => 9,
            "F0" | "D8" => 8,
            "D6" => 6,
            "D5" => 5,
            _ => unreachable!("validated at parse time"),
        }
    }

    /// Degree of the blown-up surface.
    pub fn center_degree(&self) -> Option<u32> {
        self.root_degree().checked_sub(self.a + self.b.unwrap_or(0))
    }
}

impl fmt::Display for PieceName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.b {
            Some(b) => write!(f, "<{},{},{}>", self.root, self.a, b),
            None => write!(f, "<{},{}>", self.root, self.a),
        }
    }
}

impl FromStr for PieceName {
    type Err = Error;

    /// Accepts `<P2,2,3>`, `P2,2,3`, `⟨P²,2,3⟩` and `<F0,5>`.
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace() && !"<>⟨⟩".contains(*c)).collect::<String>().replace('²', "2");
        let parts: Vec<&str> = t.split(',').collect();
        let bad = || Error::parse("piece name", format!("'{s}'"));
        let num = |x: &str| x.parse::<u32>().ok().filter(|&v| v > 0).ok_or_else(bad);
        let root = parts.first().copied().ok_or_else(bad)?;
        let name = match (root, parts.len()) {
            ("F0", 2) => PieceName { root: root.into(), a: num(parts[1])?, b: None },
            ("P2" | "D8" | "D6" | "D5", 3) => PieceName { root: root.into(), a: num(parts[1])?, b: Some(num(parts[2])?) },
            _ => return Err(bad()),
        };
        Ok(name)
    }
}

impl Serialize for PieceName {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Piece {
    /// All names of the piece; the canonical one is the lexicographically smallest.
    pub names: Vec<PieceName>,
    pub canonical: String,
    pub center_degree: u32,
    pub sides: usize,
    pub boundary: LinkWord,
    /// Label of the figure the boundary was transcribed from, e.g. `P2_25`; empty for squares.
    pub figure: String,
    /// Position of the figure among the relation figures (1-based); 0 for squares.
    pub figure_index: usize,
    /// Extremal rays of the dominating surface, in cyclic order, where they are recorded.
    pub rays: Vec<&'static str>,
    /// Whether the piece lies over a point (as opposed to a conic-bundle square).
    pub over_point: bool,
}

impl Piece {
    pub fn vertices(&self) -> Vec<Vertex> {
        let mut v = self.boundary.vertices();
        v.pop();
        v
    }

    pub fn has_name(&self, n: &PieceName) -> bool {
        self.names.contains(n)
    }
}

fn rays_for(figure: &str) -> Vec<&'static str> {
    match figure {
        "P2_15" => vec!["E1", "E5", "lines through p", "L5", "cubics through p and q, double at p", "O5", "O1"],
        "P2_23" => vec!["E3", "E1", "D1", "D3", "R2"],
        "P2_25" => vec!["E5", "L1", "C2", "C5", "O1", "E2"],
        _ => vec![],
    }
}

fn parse_catalog() -> Result<Vec<Piece>> {
    let mut out = Vec::new();
    for (i, line) in CATALOG.lines().filter(|l| !l.trim().is_empty()).enumerate() {
        let cols: Vec<&str> = line.split(" | ").collect();
        if cols.len() != 4 {
            return Err(Error::parse("catalog line", line));
        }
        let mut names = cols[1].split_whitespace().map(str::parse).collect::<Result<Vec<PieceName>>>()?;
        names.sort();
        let center_degree: u32 = cols[2].parse().map_err(|_| Error::parse("centre degree", cols[2]))?;
        let boundary: LinkWord = cols[3].parse()?;
        out.push(Piece {
            canonical: names[0].to_string(),
            names,
            center_degree,
            sides: boundary.len(),
            boundary,
            figure: cols[0].to_string(),
            figure_index: i + 1,
            rays: rays_for(cols[0]),
            over_point: true,
        });
    }
    Ok(out)
}

/// The 27 pieces over a point, validated against the standard graph on first use.
pub fn piece_catalog() -> &'static [Piece] {
    static CAT: OnceLock<Vec<Piece>> = OnceLock::new();
    CAT.get_or_init(|| {
        let cat = parse_catalog().expect("embedded catalog parses");
        let g = SarkisovGraph::standard(GraphMode::General);
        for p in &cat {
            assert!(validate_piece(p, &g), "catalog piece {} fails validation", p.canonical);
            central_symmetry(p).expect("antipodal labels agree");
        }
        cat
    })
}

/// Looks a piece up by any of its names.
pub fn find_piece(name: &str) -> Result<&'static Piece> {
    let n: PieceName = name.parse()?;
    piece_catalog().iter().find(|p| p.has_name(&n)).ok_or_else(|| Error::Invalid(format!("no piece named {n}")))
}

/// The square relation between conic bundles in `class`: the blow-ups of a `d`-point and
/// an `e`-point in distinct fibres commute.
pub fn conic_square(class: Vertex, d: u32, e: u32) -> Result<Piece> {
    if class.base() != Base::Line || d == 0 || e == 0 || d + e >= class.degree() {
        return Err(Error::Hypothesis(format!("no square for {class} with orbits {d}, {e}")));
    }
    let w: LinkWord = format!("{c} -{d},{d}-> {c} -{e},{e}-> {c} -{d},{d}-> {c} -{e},{e}-> {c}", c = class).parse()?;
    Ok(Piece {
        names: vec![],
        canonical: format!("square({class},{d},{e})"),
        center_degree: class.degree() - d - e,
        sides: 4,
        boundary: w,
        figure: String::new(),
        figure_index: 0,
        rays: vec![],
        over_point: false,
    })
}

/// Boundary closed and made of graph edges; every name satisfies the degree arithmetic.
pub fn validate_piece(p: &Piece, graph: &SarkisovGraph) -> bool {
    p.boundary.is_closed()
        && !p.boundary.is_empty()
        && p.sides == p.boundary.len()
        && graph.validate_word(&p.boundary)
        && p.names.iter().all(|n| n.center_degree() == Some(p.center_degree))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetryKind {
    Geiser,
    Bertini,
}

#[derive(Clone, Debug, Serialize)]
pub struct PieceSymmetry {
    pub piece: String,
    pub kind: SymmetryKind,
    /// Vertex `i` is exchanged with `vertex_pairs[i]`.
    pub vertex_pairs: Vec<usize>,
    /// Side `i` (from vertex `i` to `i+1`) is exchanged with `edge_pairs[i]`.
    pub edge_pairs: Vec<usize>,
}

/// The action of the Geiser or Bertini involution of the central surface, which
/// acts on the polygon as the antipodal map. `None` when the centre has degree
/// above two or the piece is not over a point.
pub fn central_symmetry(p: &Piece) -> Result<Option<PieceSymmetry>> {
    let kind = match p.center_degree {
        1 => SymmetryKind::Bertini,
        2 => SymmetryKind::Geiser,
        _ => return Ok(None),
    };
    if !p.over_point {
        return Ok(None);
    }
    let n = p.sides;
    if n % 2 != 0 {
        return Err(Error::Invalid(format!("{} has degree {} centre but {n} sides", p.canonical, p.center_degree)));
    }
    let h = n / 2;
    let vs = p.vertices();
    let pairs: Vec<usize> = (0..n).map(|i| (i + h) % n).collect();
    for i in 0..n {
        let (a, b) = (&p.boundary.links[i], &p.boundary.links[pairs[i]]);
        if vs[i] != vs[pairs[i]] || a.label() != b.label() || a.kind != b.kind {
            return Err(Error::Invalid(format!("{}: antipodal sides {i} and {} differ", p.canonical, pairs[i])));
        }
    }
    Ok(Some(PieceSymmetry { piece: p.canonical.clone(), kind, vertex_pairs: pairs.clone(), edge_pairs: pairs }))
}

fn links_from(p: &Piece, start: usize, count: usize) -> Vec<LinkEdge> {
    let n = p.sides;
    (0..count).map(|k| p.boundary.links[(start + k) % n]).collect()
}

/// The two boundary arcs between vertices `i` and `j`, both read as paths from
/// vertex `i` to vertex `j`: the first runs forward around the polygon, the
/// second backwards. The elementary relation says the two paths give the same map.
pub fn boundary_relation(p: &Piece, i: usize, j: usize) -> Result<(LinkWord, LinkWord)> {
    let n = p.sides;
    if i >= n || j >= n {
        return Err(Error::Invalid(format!("{} has {n} vertices", p.canonical)));
    }
    let vs = p.vertices();
    let fwd = (j + n - i) % n;
    let forward = LinkWord { start: vs[i], links: links_from(p, i, fwd) };
    let back = LinkWord { start: vs[j], links: links_from(p, j, n - fwd) };
    Ok((forward, back.reversed()))
}

/// Where a word sits on a boundary: the vertex it starts from and whether it runs
/// forward around the polygon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ArcPosition {
    pub start: usize,
    pub forward: bool,
}

fn same_link(a: &LinkEdge, b: &LinkEdge) -> bool {
    a.kind == b.kind && a.from == b.from && a.to == b.to && a.label() == b.label()
}

/// Finds `arc` (a non-empty path) as consecutive sides of the boundary, in either direction.
pub fn locate_arc(p: &Piece, arc: &LinkWord) -> Option<ArcPosition> {
    let n = p.sides;
    let m = arc.len();
    if m == 0 || m > n {
        return None;
    }
    for start in 0..n {
        if (0..m).all(|k| same_link(&p.boundary.links[(start + k) % n], &arc.links[k])) {
            return Some(ArcPosition { start, forward: true });
        }
        let back: Vec<LinkEdge> = (0..m).map(|k| p.boundary.links[(start + n - 1 - k) % n].inverse()).collect();
        if back.iter().zip(&arc.links).all(|(a, b)| same_link(a, b)) {
            return Some(ArcPosition { start, forward: false });
        }
    }
    None
}

/// The rest of the boundary, read with the same endpoints as `arc`.
pub fn complementary_arc(p: &Piece, arc: &LinkWord) -> Result<LinkWord> {
    let pos = locate_arc(p, arc).ok_or_else(|| Error::Invalid(format!("'{arc}' is not on the boundary of {}", p.canonical)))?;
    let n = p.sides;
    let m = arc.len();
    let end = if pos.forward { (pos.start + m) % n } else { (pos.start + n - m) % n };
    let (fwd, back) = boundary_relation(p, pos.start, end)?;
    Ok(if pos.forward { back } else { fwd })
}

/// A compact view of a piece for listings.
#[derive(Clone, Debug, Serialize)]
pub struct PieceSummary {
    pub canonical: String,
    pub names: Vec<PieceName>,
    pub figure: String,
    pub center_degree: u32,
    pub sides: usize,
    pub boundary: LinkWord,
    pub symmetry: Option<SymmetryKind>,
}

impl From<&Piece> for PieceSummary {
    fn from(p: &Piece) -> Self {
        PieceSummary {
            canonical: p.canonical.clone(),
            names: p.names.clone(),
            figure: p.figure.clone(),
            center_degree: p.center_degree,
            sides: p.sides,
            boundary: p.boundary.clone(),
            symmetry: central_symmetry(p).ok().flatten().map(|s| s.kind),
        }
    }
}

/// The link types that occur on catalog boundaries, in order of first appearance.
pub fn boundary_link_types() -> Vec<LinkType> {
    let mut out: Vec<LinkType> = Vec::new();
    for p in piece_catalog() {
        for l in &p.boundary.links {
            if !out.contains(&l.kind) {
                out.push(l.kind);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_shape() {
        let cat = piece_catalog();
        assert_eq!(cat.len(), 27);
        assert_eq!(cat.iter().map(|p| p.names.len()).sum::<usize>(), 45);
        let p = find_piece("<P2,1,1>").unwrap();
        assert_eq!(p.boundary.to_string(), "P2 -I1-> C8 -1,1-> C8 -IV-> C8 -1,1-> C8 -III1-> P2");
        assert_eq!((p.center_degree, p.sides), (7, 5));
        assert_eq!(find_piece("P2,1,7").unwrap().sides, 12);
        assert_eq!(find_piece("⟨P²,2,3⟩").unwrap().canonical, "<D6,1,1>");
        assert!(std::ptr::eq(find_piece("<D8,1,3>").unwrap(), find_piece("<D6,1,1>").unwrap()));
        assert_eq!(boundary_link_types().len(), 5);
    }

    #[test]
    fn corrupted_piece_fails() {
        let g = SarkisovGraph::standard(GraphMode::General);
        let mut p = find_piece("<P2,2,4>").unwrap().clone();
        assert!(validate_piece(&p, &g));
        let i = p.boundary.links.iter().position(|l| l.d == Some(4) && l.dp == Some(4)).unwrap();
        p.boundary.links[i].d = Some(5);
        p.boundary.links[i].dp = Some(5);
        assert!(!validate_piece(&p, &g));
    }

    #[test]
    fn symmetries() {
        let s = central_symmetry(find_piece("<P2,2,5>").unwrap()).unwrap().unwrap();
        assert_eq!(s.kind, SymmetryKind::Geiser);
        let vs = find_piece("<P2,2,5>").unwrap().vertices();
        assert_eq!(vs, vec![Vertex::P2, Vertex::D8, Vertex::D5, Vertex::P2, Vertex::D8, Vertex::D5]);
        assert!(central_symmetry(find_piece("<P2,1,1>").unwrap()).unwrap().is_none());
        assert_eq!(central_symmetry(find_piece("<D6,2,3>").unwrap()).unwrap().unwrap().kind, SymmetryKind::Bertini);
        let with: usize = piece_catalog().iter().filter(|p| central_symmetry(p).unwrap().is_some()).count();
        assert_eq!(with, piece_catalog().iter().filter(|p| p.center_degree <= 2).count());
    }

    #[test]
    fn cut_of_p2_2_3() {
        let p = find_piece("<P2,2,3>").unwrap();
        let (a, b) = boundary_relation(p, 0, 4).unwrap();
        assert_eq!(a.to_string(), "P2 -2,1-> D8 -3,1-> D6 -1,3-> D8 -1,2-> P2");
        assert_eq!(b.to_string(), "P2 -3,3-> P2");
        let (a, b) = boundary_relation(p, 2, 2).unwrap();
        assert!(a.is_empty() && b.len() == 5);
        let (a, b) = boundary_relation(p, 1, 2).unwrap();
        assert_eq!((a.len(), b.len()), (1, 4));
    }

    #[test]
    fn complement_of_middle_arc() {
        let p = find_piece("<P2,2,3>").unwrap();
        let arc: LinkWord = "D8 -3,1-> D6 -1,3-> D8".parse().unwrap();
        assert_eq!(complementary_arc(p, &arc).unwrap().to_string(), "D8 -1,2-> P2 -3,3-> P2 -2,1-> D8");
        let rev = arc.reversed();
        assert_eq!(complementary_arc(p, &rev).unwrap(), complementary_arc(p, &arc).unwrap().reversed());
    }

    #[test]
    fn squares() {
        let g = SarkisovGraph::standard(GraphMode::General);
        let s = conic_square(Vertex::C6, 1, 2).unwrap();
        assert!(validate_piece(&s, &g));
        assert_eq!(s.center_degree, 3);
        assert!(central_symmetry(&s).unwrap().is_none());
        assert!(conic_square(Vertex::P2, 1, 1).is_err());
    }
}
