//! Rewriting closed link words into involution tokens.
//!
//! The reducer manipulates factorization types only. A word is first matched
//! against the quadratic, Geiser and Bertini shapes; the seven remaining Del
//! Pezzo shapes are rewritten with the boundary of a piece or its central
//! symmetry; words through conic bundles become Jonquières tokens. Whenever a
//! rewrite produces words whose total length is not smaller than the input,
//! those words are resolved inside the same step, so the pending length drops
//! at every step of the top-level trace.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Base, FiberingShape, GraphMode, LinkType, LinkWord, SarkisovGraph, Vertex};
use crate::pieces::{central_symmetry, complementary_arc, find_piece, locate_arc, SymmetryKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TokenKind {
    LinearInvolutionProduct,
    QuadraticInvolution,
    Geiser,
    Bertini,
    #[serde(rename = "jonquieres-1")]
    Jonquieres1,
    #[serde(rename = "jonquieres-2+2")]
    Jonquieres22,
    #[serde(rename = "jonquieres-4")]
    Jonquieres4,
    AutomorphismResidual,
    /// A map known to be an involution up to an automorphism.
    KnownInvolution,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Token {
    pub kind: TokenKind,
    /// The rule that emitted the token.
    pub rule: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center_degree: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub picard_rank: Option<u32>,
}

impl Token {
    fn new(kind: TokenKind, rule: &str) -> Self {
        Token { kind, rule: rule.into(), center_degree: None, picard_rank: None }
    }

    fn central(kind: SymmetryKind, rule: &str, rank: u32) -> Self {
        let (kind, degree) = match kind {
            SymmetryKind::Geiser => (TokenKind::Geiser, 2),
            SymmetryKind::Bertini => (TokenKind::Bertini, 1),
        };
        Token { kind, rule: rule.into(), center_degree: Some(degree), picard_rank: Some(rank) }
    }

    /// Every token kind other than the residual automorphism is a single involution
    /// or an element of a group already known to be generated by involutions.
    pub fn is_involution_token(&self) -> bool {
        self.kind != TokenKind::AutomorphismResidual
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Item {
    Token(Token),
    Word(LinkWord),
}

#[derive(Clone, Debug, Serialize)]
pub struct RewriteStep {
    pub rule: String,
    pub input: LinkWord,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub piece: Option<String>,
    pub output: Vec<Item>,
    /// The general-position hypothesis the step relies on.
    pub side_condition: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub road_not_taken: Option<String>,
    /// Resolutions of output words that were expanded inside this step.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sub_steps: Vec<RewriteStep>,
}

impl RewriteStep {
    fn new(rule: &str, input: &LinkWord, output: Vec<Item>, side: &str) -> Self {
        RewriteStep {
            rule: rule.into(),
            input: input.clone(),
            piece: None,
            output,
            side_condition: side.into(),
            road_not_taken: None,
            sub_steps: vec![],
        }
    }

    pub fn output_words(&self) -> impl Iterator<Item = &LinkWord> {
        self.output.iter().filter_map(|i| match i {
            Item::Word(w) => Some(w),
            Item::Token(_) => None,
        })
    }

    pub fn output_length(&self) -> usize {
        self.output_words().map(LinkWord::len).sum()
    }

    /// Number of steps including nested resolutions.
    pub fn total_steps(&self) -> usize {
        1 + self.sub_steps.iter().map(RewriteStep::total_steps).sum::<usize>()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReduceOptions {
    /// The ground field is `F_2`.
    pub f2: bool,
    pub max_sl: usize,
    pub step_budget: usize,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions { f2: false, max_sl: 8, step_budget: 512 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Reduction {
    pub input: LinkWord,
    pub tokens: Vec<Token>,
    pub steps: Vec<RewriteStep>,
    pub assumptions: Vec<String>,
    /// Total length of pending words before each top-level step, then at the end.
    pub pending_lengths: Vec<usize>,
}

impl Reduction {
    pub fn pure(&self) -> bool {
        self.tokens.iter().all(Token::is_involution_token)
    }

    pub fn strictly_decreasing(&self) -> bool {
        self.pending_lengths.windows(2).all(|w| w[1] < w[0])
    }
}

const NO_CONDITION: &str = "none";

/// Splits a closed word at its intermediate visits to `P2`.
pub fn split_at_p2(w: &LinkWord) -> Vec<LinkWord> {
    let mut out = Vec::new();
    let mut cur = LinkWord::empty(w.start);
    for l in &w.links {
        cur.links.push(*l);
        if l.to == Vertex::P2 {
            out.push(std::mem::replace(&mut cur, LinkWord::empty(Vertex::P2)));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn word(s: &str) -> LinkWord {
    s.parse().expect("rule words parse")
}

fn residual(rule: &str) -> Item {
    Item::Token(Token::new(TokenKind::AutomorphismResidual, rule))
}

/// The quadratic, Geiser and Bertini simplifications. Returns `None` when `w` has none of these shapes.
pub fn simplify_once(w: &LinkWord) -> Result<Option<RewriteStep>> {
    const QUAD: [(&str, &str); 2] = [("Q1", "P2 -3,3-> P2"), ("Q2", "P2 -2,1-> D8 -1,2-> P2")];
    for (rule, s) in QUAD {
        if *w == word(s) {
            let out = vec![Item::Token(Token::new(TokenKind::QuadraticInvolution, rule)), residual(rule)];
            return Ok(Some(RewriteStep::new(rule, w, out, "none: an automorphism turns the quadratic map into an involution")));
        }
    }
    const CENTRAL: [(&str, &str, SymmetryKind); 8] = [
        ("G1", "P2 -7,7-> P2", SymmetryKind::Geiser),
        ("G2", "P2 -2,1-> D8 -6,6-> D8 -1,2-> P2", SymmetryKind::Geiser),
        ("G3", "P2 -5,1-> D5 -3,3-> D5 -1,5-> P2", SymmetryKind::Geiser),
        ("G4", "P2 -2,1-> D8 -3,1-> D6 -4,4-> D6 -1,3-> D8 -1,2-> P2", SymmetryKind::Geiser),
        ("B1", "P2 -8,8-> P2", SymmetryKind::Bertini),
        ("B2", "P2 -2,1-> D8 -7,7-> D8 -1,2-> P2", SymmetryKind::Bertini),
        ("B3", "P2 -5,1-> D5 -4,4-> D5 -1,5-> P2", SymmetryKind::Bertini),
        ("B4", "P2 -2,1-> D8 -3,1-> D6 -5,5-> D6 -1,3-> D8 -1,2-> P2", SymmetryKind::Bertini),
    ];
    for (rule, s, kind) in CENTRAL {
        if *w != word(s) {
            continue;
        }
        // The middle link is a loop dominated by a Del Pezzo surface of degree 2 or 1 and
        // Picard rank 2; its deck involution absorbs the link and the word still chains.
        let mid = w.len() / 2;
        let mut rest = w.clone();
        rest.links.remove(mid);
        let mut out = vec![Item::Token(Token::central(kind, rule, 2))];
        if rest.is_empty() {
            out.push(residual(rule));
        } else {
            out.extend(split_at_p2(&rest).into_iter().map(Item::Word));
        }
        return Ok(Some(RewriteStep::new(rule, w, out, "none beyond minimality of the factorization")));
    }
    Ok(None)
}

/// Replaces `len` links of `w` starting at `pos` by the complementary arc of `piece`.
pub fn rewrite_via_piece(w: &LinkWord, piece: &str, pos: usize, len: usize) -> Result<LinkWord> {
    let p = find_piece(piece)?;
    if pos + len > w.len() || len == 0 {
        return Err(Error::Invalid(format!("links {pos}..{} are outside '{w}'", pos + len)));
    }
    let vs = w.vertices();
    let arc = LinkWord { start: vs[pos], links: w.links[pos..pos + len].to_vec() };
    let other = complementary_arc(p, &arc)?;
    let mut links = w.links[..pos].to_vec();
    links.extend(other.links);
    links.extend_from_slice(&w.links[pos + len..]);
    let out = LinkWord { start: w.start, links };
    debug_assert!(out.chains());
    Ok(out)
}

/// Checks that link `pos` of `w` lies on `piece` and that the piece carries the expected
/// central involution.
fn central_on_piece(w: &LinkWord, piece: &str, pos: usize, kind: SymmetryKind) -> Result<String> {
    let p = find_piece(piece)?;
    let vs = w.vertices();
    let arc = LinkWord { start: vs[pos], links: vec![w.links[pos]] };
    locate_arc(p, &arc).ok_or_else(|| Error::Verification(format!("'{arc}' is not on {piece}")))?;
    match central_symmetry(p)? {
        Some(s) if s.kind == kind => Ok(p.canonical.clone()),
        _ => Err(Error::Verification(format!("{piece} has no central {kind:?} involution"))),
    }
}

fn fibering_step(w: &LinkWord, shape: FiberingShape) -> RewriteStep {
    let (rule, items) = match shape {
        FiberingShape::A { .. } => ("fibering-a", vec![Item::Token(Token::new(TokenKind::Jonquieres1, "fibering-a")), residual("fibering-a")]),
        FiberingShape::B => ("fibering-b", vec![Item::Token(Token::new(TokenKind::Jonquieres4, "fibering-b")), residual("fibering-b")]),
        FiberingShape::C => (
            "fibering-c",
            vec![
                Item::Token(Token::new(TokenKind::QuadraticInvolution, "fibering-c")),
                Item::Token(Token::new(TokenKind::Jonquieres22, "fibering-c")),
                Item::Token(Token::new(TokenKind::QuadraticInvolution, "fibering-c")),
                residual("fibering-c"),
            ],
        ),
    };
    let mut s = RewriteStep::new(rule, w, items, NO_CONDITION);
    if matches!(shape, FiberingShape::C) {
        s.side_condition = "none: at most two (Q2) adjustments make both ends carry the same pair of 2-points".into();
    }
    s
}

struct Case {
    rule: &'static str,
    word: &'static str,
}

const CASES: [Case; 7] = [
    Case { rule: "case-i", word: "P2 -5,1-> D5 -1,5-> P2" },
    Case { rule: "case-ii", word: "P2 -2,1-> D8 -3,1-> D6 -1,3-> D8 -1,2-> P2" },
    Case { rule: "case-iii", word: "P2 -2,1-> D8 -4,4-> D8 -1,2-> P2" },
    Case { rule: "case-iv", word: "P2 -2,1-> D8 -3,1-> D6 -3,3-> D6 -1,3-> D8 -1,2-> P2" },
    Case { rule: "case-v", word: "P2 -2,1-> D8 -3,1-> D6 -2,2-> D6 -1,3-> D8 -1,2-> P2" },
    Case { rule: "case-vi", word: "P2 -5,1-> D5 -2,5-> D8 -1,2-> P2" },
    Case { rule: "case-vii", word: "P2 -6,6-> P2" },
];

fn words(ws: Vec<LinkWord>) -> Vec<Item> {
    ws.into_iter().flat_map(|w| split_at_p2(&w)).map(Item::Word).collect()
}

fn case_step(rule: &str, w: &LinkWord, opts: &ReduceOptions) -> Result<RewriteStep> {
    let s = match rule {
        "case-i" => {
            let glued = rewrite_via_piece(w, "<P2,1,5>", 0, 2)?;
            let iv = glued.links.iter().position(|l| l.kind == LinkType::IV).ok_or_else(|| Error::Verification("no exchange of rulings".into()))?;
            let out = rewrite_via_piece(&glued, "<P2,1,1>", iv, 1)?;
            let mut s = RewriteStep::new(rule, w, words(vec![out]), "the two rational points on the D5 surface are in general position (true for any two)");
            s.piece = Some("<D5,1,1> glued with <F0,1>".into());
            s
        }
        "case-ii" => {
            let out = rewrite_via_piece(w, "<P2,2,3>", 1, 2)?;
            let mut s = RewriteStep::new(rule, w, words(vec![out]), "the two rational points on the D6 surface are in general position (true for any two)");
            s.piece = Some(find_piece("<P2,2,3>")?.canonical.clone());
            s
        }
        "case-iii" => {
            let out = rewrite_via_piece(w, "<P2,2,4>", 1, 1)?;
            let mut s = RewriteStep::new(rule, w, words(vec![out]), "a rational point of the D8 surface is in general position with the 4-point (true for every rational point)");
            s.piece = Some(find_piece("<P2,2,4>")?.canonical.clone());
            s.road_not_taken = Some(
                "with a 2-point general with the 4-point: a Geiser involution of <D8,2,4> and a Jonquieres 2+2 map; \
                 with a 3-point: a Bertini involution of <D8,3,4> and a (G4) simplification"
                    .into(),
            );
            s
        }
        "case-iv" if opts.f2 => {
            let out = vec![Item::Token(Token::new(TokenKind::KnownInvolution, rule)), residual(rule)];
            RewriteStep::new("case-iv-f2", w, out, "over F2 every map of this type is an involution up to an automorphism")
        }
        "case-iv" => {
            let piece = central_on_piece(w, "<D6,1,3>", 2, SymmetryKind::Geiser)?;
            let ii = word(CASES[1].word);
            let mut out = vec![Item::Token(Token::central(SymmetryKind::Geiser, rule, 3))];
            out.extend(words(vec![ii.clone(), ii]));
            let mut s = RewriteStep::new(rule, w, out, "a rational point of the D6 surface is in general position with the 3-point (exists unless k = F2)");
            s.piece = Some(piece);
            s
        }
        "case-v" => {
            let out = rewrite_via_piece(w, "<D6,1,2>", 1, 3)?;
            let mut s = RewriteStep::new(rule, w, words(vec![out]), "any rational point of the D6 surface is in general position with the 2-point");
            s.piece = Some(find_piece("<D6,1,2>")?.canonical.clone());
            s.road_not_taken = Some("with a 3-point general with the 2-point: a Bertini involution of <D6,2,3> and a word of case (iv)".into());
            s
        }
        "case-vi" => {
            let piece = central_on_piece(w, "<P2,2,5>", 1, SymmetryKind::Geiser)?;
            let mut out = vec![Item::Token(Token::central(SymmetryKind::Geiser, rule, 3))];
            out.extend(words(vec![word(CASES[0].word), word("P2 -2,1-> D8 -1,2-> P2")]));
            let mut s = RewriteStep::new(rule, w, out, "any rational point of the D5 surface is in general position with the 2-point");
            s.piece = Some(piece);
            s
        }
        "case-vii" => {
            let piece = central_on_piece(w, "<P2,1,6>", 0, SymmetryKind::Geiser)?;
            let mut out = vec![Item::Token(Token::central(SymmetryKind::Geiser, rule, 3))];
            out.extend(words(vec![word("P2 -I1-> C8 -6,6-> C8 -III1-> P2")]));
            out.push(residual(rule));
            let mut s = RewriteStep::new(
                rule,
                w,
                out,
                "a rational point of P2 is in general position with the 6-point (all but at most one over a finite field, all but finitely many otherwise)",
            );
            s.piece = Some(piece);
            s.road_not_taken = Some("with a 2-point general with the 6-point: a Bertini involution of <P2,2,6> and a (G2) simplification".into());
            s
        }
        _ => return Err(Error::Invalid(format!("unknown rule {rule}"))),
    };
    Ok(s)
}

/// One rewrite of `w`, without resolving the output words.
pub fn rewrite_once(w: &LinkWord, opts: &ReduceOptions) -> Result<RewriteStep> {
    if let Some(s) = simplify_once(w)? {
        return Ok(s);
    }
    for c in &CASES {
        if *w == word(c.word) {
            return case_step(c.rule, w, opts);
        }
        if w.reversed() == word(c.word) {
            // Factor the inverse and invert: involutions are their own inverses.
            let mut s = case_step(c.rule, &w.reversed(), opts)?;
            s.rule = format!("{} (inverse)", s.rule);
            s.input = w.clone();
            s.output.reverse();
            for item in &mut s.output {
                if let Item::Word(u) = item {
                    *u = u.reversed();
                }
            }
            return Ok(s);
        }
    }
    let g = SarkisovGraph::standard(GraphMode::General);
    let c = g.classify_word(w)?;
    if let Some(shape) = c.shape {
        return Ok(fibering_step(w, shape));
    }
    Err(Error::Invalid(format!("no rule applies to '{w}'")))
}

struct Budget {
    left: usize,
    trace: Vec<String>,
}

impl Budget {
    fn spend(&mut self, w: &LinkWord) -> Result<()> {
        if self.left == 0 {
            return Err(Error::Verification(format!("step budget exhausted; partial trace: {}", self.trace.join("; "))));
        }
        self.left -= 1;
        self.trace.push(w.to_string());
        Ok(())
    }
}

/// One step, with output words expanded in place when they are not shorter in total.
fn full_step(w: &LinkWord, opts: &ReduceOptions, budget: &mut Budget) -> Result<RewriteStep> {
    budget.spend(w)?;
    let mut s = rewrite_once(w, opts)?;
    if s.output_words().next().is_none() || s.output_length() < w.len() {
        return Ok(s);
    }
    let mut out = Vec::new();
    for item in std::mem::take(&mut s.output) {
        match item {
            Item::Token(t) => out.push(Item::Token(t)),
            Item::Word(u) => {
                let leaf = u.vertices().iter().any(|v| v.base() == Base::Line);
                if u.len() >= w.len() && !leaf {
                    return Err(Error::Verification(format!("rule {} produced '{u}', not shorter than '{w}'", s.rule)));
                }
                let (tokens, steps) = resolve(&u, opts, budget)?;
                out.extend(tokens.into_iter().map(Item::Token));
                s.sub_steps.extend(steps);
            }
        }
    }
    s.output = out;
    Ok(s)
}

fn resolve(w: &LinkWord, opts: &ReduceOptions, budget: &mut Budget) -> Result<(Vec<Token>, Vec<RewriteStep>)> {
    let s = full_step(w, opts, budget)?;
    let mut tokens = Vec::new();
    let mut steps = Vec::new();
    for item in &s.output {
        match item {
            Item::Token(t) => tokens.push(t.clone()),
            Item::Word(u) => {
                let (t, st) = resolve(u, opts, budget)?;
                tokens.extend(t);
                steps.extend(st);
            }
        }
    }
    steps.insert(0, s);
    Ok((tokens, steps))
}

fn finalize(t: Token) -> Token {
    if t.kind == TokenKind::AutomorphismResidual {
        Token { kind: TokenKind::LinearInvolutionProduct, ..t }
    } else {
        t
    }
}

/// Rewrites a closed word at `P2` until only tokens remain. Residual automorphisms are
/// reported as products of linear involutions.
pub fn reduce_to_involutions(w: &LinkWord, opts: &ReduceOptions) -> Result<Reduction> {
    if w.start != Vertex::P2 || !w.is_closed() {
        return Err(Error::Invalid(format!("'{w}' is not a closed word at P2")));
    }
    if !SarkisovGraph::standard(GraphMode::General).validate_word(w) {
        return Err(Error::Invalid(format!("'{w}' is not a path in the graph")));
    }
    if w.len() > opts.max_sl {
        return Err(Error::Hypothesis(format!("word length {} exceeds the bound {}", w.len(), opts.max_sl)));
    }
    let mut budget = Budget { left: opts.step_budget, trace: vec![] };
    // Words are processed left to right; tokens are collected in the same order.
    let mut pending: Vec<LinkWord> = split_at_p2(w);
    pending.reverse();
    let mut tokens = Vec::new();
    let mut steps = Vec::new();
    let mut lengths = vec![pending.iter().map(LinkWord::len).sum::<usize>()];
    while let Some(u) = pending.pop() {
        let s = full_step(&u, opts, &mut budget)?;
        let mut new_words = Vec::new();
        for item in &s.output {
            match item {
                Item::Token(t) => tokens.push(t.clone()),
                Item::Word(v) => new_words.push(v.clone()),
            }
        }
        // Words produced by a step are resolved before the rest of the queue.
        pending.extend(new_words.into_iter().rev());
        steps.push(s);
        let total = pending.iter().map(LinkWord::len).sum::<usize>();
        if total >= *lengths.last().expect("non-empty") {
            return Err(Error::Verification(format!("pending length did not decrease at step {}", steps.len())));
        }
        lengths.push(total);
    }
    let mut assumptions: Vec<String> = Vec::new();
    fn collect(s: &RewriteStep, out: &mut Vec<String>) {
        if s.side_condition != NO_CONDITION && !out.contains(&s.side_condition) {
            out.push(s.side_condition.clone());
        }
        s.sub_steps.iter().for_each(|t| collect(t, out));
    }
    steps.iter().for_each(|s| collect(s, &mut assumptions));
    Ok(Reduction { input: w.clone(), tokens: tokens.into_iter().map(finalize).collect(), steps, assumptions, pending_lengths: lengths })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(r: &Reduction) -> Vec<TokenKind> {
        r.tokens.iter().map(|t| t.kind).filter(|k| *k != TokenKind::LinearInvolutionProduct).collect()
    }

    fn reduce(s: &str) -> Reduction {
        reduce_to_involutions(&s.parse().unwrap(), &ReduceOptions::default()).unwrap()
    }

    #[test]
    fn easy_simplifications() {
        let s = simplify_once(&"P2 -3,3-> P2".parse().unwrap()).unwrap().unwrap();
        assert_eq!(s.rule, "Q1");
        let s = simplify_once(&"P2 -7,7-> P2".parse().unwrap()).unwrap().unwrap();
        assert_eq!(s.rule, "G1");
        assert!(matches!(&s.output[1], Item::Token(t) if t.kind == TokenKind::AutomorphismResidual));
        let s = simplify_once(&"P2 -2,1-> D8 -7,7-> D8 -1,2-> P2".parse().unwrap()).unwrap().unwrap();
        assert_eq!(s.rule, "B2");
        assert!(s.output_length() < 3);
        assert!(simplify_once(&"P2 -6,6-> P2".parse().unwrap()).unwrap().is_none());
    }

    #[test]
    fn piece_rewrites() {
        let r = reduce("P2 -2,1-> D8 -3,1-> D6 -1,3-> D8 -1,2-> P2");
        assert_eq!(kinds(&r), vec![TokenKind::QuadraticInvolution; 3]);
        let r = reduce("P2 -6,6-> P2");
        assert_eq!(kinds(&r), vec![TokenKind::Geiser, TokenKind::Jonquieres1]);
        let r = reduce("P2 -5,1-> D5 -1,5-> P2");
        assert_eq!(kinds(&r), vec![TokenKind::Jonquieres1, TokenKind::Jonquieres1]);
    }

    #[test]
    fn fibering_and_empty() {
        let r = reduce("P2 -2,1-> D8 -I2-> C6 -d,d-> C6 -III2-> D8 -1,2-> P2");
        let k = kinds(&r);
        assert!(k.contains(&TokenKind::Jonquieres22) && k.contains(&TokenKind::QuadraticInvolution));
        let r = reduce("P2");
        assert!(r.tokens.is_empty() && r.steps.is_empty());
    }

    #[test]
    fn f2_flag_routes_case_iv() {
        let w: LinkWord = "P2 -2,1-> D8 -3,1-> D6 -3,3-> D6 -1,3-> D8 -1,2-> P2".parse().unwrap();
        let r = reduce_to_involutions(&w, &ReduceOptions { f2: true, ..Default::default() }).unwrap();
        assert_eq!(kinds(&r), vec![TokenKind::KnownInvolution]);
        let r = reduce_to_involutions(&w, &ReduceOptions::default()).unwrap();
        assert_eq!(kinds(&r).iter().filter(|k| **k == TokenKind::Geiser).count(), 1);
        assert_eq!(kinds(&r).iter().filter(|k| **k == TokenKind::QuadraticInvolution).count(), 6);
    }

    #[test]
    fn all_enumerated_words_reduce() {
        let g = SarkisovGraph::standard(GraphMode::General);
        let e = g.enumerate_irreducible_types(5).unwrap();
        for w in e.del_pezzo.iter().chain(&e.fibering) {
            for f2 in [false, true] {
                let r = reduce_to_involutions(w, &ReduceOptions { f2, ..Default::default() }).unwrap();
                assert!(r.pure() && !r.tokens.is_empty(), "{w}");
                assert!(r.strictly_decreasing(), "{w}");
            }
        }
    }

    #[test]
    fn rejects_unknown_and_long_words() {
        let w: LinkWord = "P2 -I1-> C8 -IV-> C8 -III1-> P2".parse().unwrap();
        assert!(reduce_to_involutions(&w, &ReduceOptions::default()).is_err());
        let long: LinkWord = "P2 -3,3-> P2 -3,3-> P2 -3,3-> P2".parse().unwrap();
        assert!(reduce_to_involutions(&long, &ReduceOptions { max_sl: 2, ..Default::default() }).is_err());
        let r = reduce_to_involutions(&long, &ReduceOptions::default()).unwrap();
        assert_eq!(kinds(&r), vec![TokenKind::QuadraticInvolution; 3]);
    }
}
