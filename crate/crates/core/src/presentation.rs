//! Quivers with relations, as read from the line-oriented presentation
//! format:
//!
//! ```text
//! # comment
//! vertices: 3
//! arrow a 1 2          # a: 1 -> 2, optional trailing degree
//! arrow a' 2 1
//! relation a.a' - 2/3*b'.b
//! duality a <-> a'
//! order: 1 2 3
//! ```
//!
//! Products compose right to left: in `b.a` the arrow `a` is traversed
//! first. Vertices are 1-based in text and 0-based in memory.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{format_rational, parse_rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
    /// Degree declared in the source text, if any. Used by [`AlgebraPresentation::declared_degrees`].
    pub degree: Option<i64>,
}

/// A path as arrow indices in traversal order (first arrow first).
pub type Path = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub terms: Vec<(BigRational, Path)>,
}

impl Relation {
    pub fn length(&self) -> usize {
        self.terms.first().map_or(0, |(_, p)| p.len())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraPresentation {
    pub vertex_count: usize,
    pub arrows: Vec<Arrow>,
    pub relations: Vec<Relation>,
    /// `order[k]` is the vertex in position `k` of the simple ordering.
    pub order: Vec<usize>,
    /// Arrow involution, if declared.
    pub duality: Option<Vec<usize>>,
}

impl AlgebraPresentation {
    pub fn new(vertex_count: usize) -> Self {
        AlgebraPresentation {
            vertex_count,
            arrows: Vec::new(),
            relations: Vec::new(),
            order: (0..vertex_count).collect(),
            duality: None,
        }
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    /// Position of every vertex in the simple ordering.
    pub fn rank(&self) -> Vec<usize> {
        let mut rank = vec![0; self.vertex_count];
        for (k, &v) in self.order.iter().enumerate() {
            rank[v] = k;
        }
        rank
    }

    pub fn path_source(&self, path: &[usize]) -> Option<usize> {
        path.first().map(|&a| self.arrows[a].source)
    }

    pub fn path_target(&self, path: &[usize]) -> Option<usize> {
        path.last().map(|&a| self.arrows[a].target)
    }

    /// `b.a` style label, right to left.
    pub fn path_label(&self, path: &[usize]) -> String {
        path.iter()
            .rev()
            .map(|&a| self.arrows[a].name.as_str())
            .collect::<Vec<_>>()
            .join(".")
    }

    /// Degrees from the optional arrow degree column (missing entries count
    /// as 1).
    pub fn declared_degrees(&self) -> Vec<i64> {
        self.arrows.iter().map(|a| a.degree.unwrap_or(1)).collect()
    }

    pub fn max_relation_length(&self) -> usize {
        self.relations.iter().map(Relation::length).max().unwrap_or(2)
    }

    pub fn validate(&self) -> Result<()> {
        if self.vertex_count == 0 {
            return Err(Error::Presentation("vertex count must be positive".into()));
        }
        let mut names = HashMap::new();
        for (i, a) in self.arrows.iter().enumerate() {
            if a.source >= self.vertex_count || a.target >= self.vertex_count {
                return Err(Error::Presentation(format!(
                    "arrow `{}` has an endpoint outside 1..{}",
                    a.name, self.vertex_count
                )));
            }
            if names.insert(a.name.clone(), i).is_some() {
                return Err(Error::Presentation(format!("arrow `{}` declared twice", a.name)));
            }
        }
        for (ri, rel) in self.relations.iter().enumerate() {
            self.validate_relation(ri, rel)?;
        }
        let mut seen = vec![false; self.vertex_count];
        if self.order.len() != self.vertex_count {
            return Err(Error::Presentation("order must list every vertex once".into()));
        }
        for &v in &self.order {
            if v >= self.vertex_count || seen[v] {
                return Err(Error::Presentation("order must list every vertex once".into()));
            }
            seen[v] = true;
        }
        if let Some(d) = &self.duality {
            self.validate_duality_map(d)?;
        }
        Ok(())
    }

    fn validate_relation(&self, ri: usize, rel: &Relation) -> Result<()> {
        let bad = |message: String| Error::BadRelation {
            relation: ri + 1,
            message,
        };
        if rel.terms.is_empty() {
            return Err(bad("relation is zero".into()));
        }
        let len = rel.terms[0].1.len();
        let mut ends = None;
        for (_, path) in &rel.terms {
            if path.len() != len {
                return Err(bad("inhomogeneous relation: paths of different lengths".into()));
            }
            if path.len() < 2 {
                return Err(bad("relation paths must have length at least 2".into()));
            }
            for w in path.windows(2) {
                if self.arrows[w[0]].target != self.arrows[w[1]].source {
                    return Err(bad(format!(
                        "path {} is not composable",
                        self.path_label(path)
                    )));
                }
            }
            let e = (self.path_source(path), self.path_target(path));
            match ends {
                None => ends = Some(e),
                Some(prev) if prev != e => {
                    return Err(bad("paths have mismatched endpoints".into()));
                }
                _ => {}
            }
        }
        Ok(())
    }

    fn validate_duality_map(&self, d: &[usize]) -> Result<()> {
        if d.len() != self.arrows.len() {
            return Err(Error::BadDuality("every arrow needs a partner".into()));
        }
        for (a, &b) in d.iter().enumerate() {
            if b >= d.len() || d[b] != a {
                return Err(Error::BadDuality(format!(
                    "pairing of `{}` is not involutive",
                    self.arrows[a].name
                )));
            }
        }
        Ok(())
    }

    /// Writes the presentation back in the text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "vertices: {}", self.vertex_count).unwrap();
        for a in &self.arrows {
            match a.degree {
                Some(d) => writeln!(out, "arrow {} {} {} {}", a.name, a.source + 1, a.target + 1, d),
                None => writeln!(out, "arrow {} {} {}", a.name, a.source + 1, a.target + 1),
            }
            .unwrap();
        }
        for rel in &self.relations {
            writeln!(out, "relation {}", self.format_relation(rel)).unwrap();
        }
        if let Some(d) = &self.duality {
            for (a, &b) in d.iter().enumerate() {
                if a <= b {
                    writeln!(out, "duality {} <-> {}", self.arrows[a].name, self.arrows[b].name)
                        .unwrap();
                }
            }
        }
        let order: Vec<String> = self.order.iter().map(|v| (v + 1).to_string()).collect();
        writeln!(out, "order: {}", order.join(" ")).unwrap();
        out
    }

    pub fn format_relation(&self, rel: &Relation) -> String {
        format_combination(&rel.terms, |p| self.path_label(p))
    }

    /// Block sum of two presentations; the second one's vertices are
    /// shifted past the first's and its order appended.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let shift_v = self.vertex_count;
        let shift_a = self.arrows.len();
        let mut out = self.clone();
        out.vertex_count += other.vertex_count;
        for a in &other.arrows {
            let mut name = a.name.clone();
            while out.arrows.iter().any(|b| b.name == name) {
                name.push_str("_2");
            }
            out.arrows.push(Arrow {
                name,
                source: a.source + shift_v,
                target: a.target + shift_v,
                degree: a.degree,
            });
        }
        for rel in &other.relations {
            out.relations.push(Relation {
                terms: rel
                    .terms
                    .iter()
                    .map(|(c, p)| (c.clone(), p.iter().map(|a| a + shift_a).collect()))
                    .collect(),
            });
        }
        out.order.extend(other.order.iter().map(|v| v + shift_v));
        out.duality = match (&self.duality, &other.duality) {
            (Some(x), Some(y)) => {
                let mut d = x.clone();
                d.extend(y.iter().map(|b| b + shift_a));
                Some(d)
            }
            _ => None,
        };
        out
    }
}

/// Renders `c1*p1 + c2*p2 - ...` with unit coefficients elided.
pub fn format_combination<T>(
    terms: &[(BigRational, T)],
    label: impl Fn(&T) -> String,
) -> String {
    let mut out = String::new();
    for (i, (c, p)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !mag.is_one() {
            out.push_str(&format_rational(&mag));
            out.push('*');
        }
        out.push_str(&label(p));
    }
    out
}

fn is_name_char(c: char) -> bool {
    !c.is_whitespace() && !".*+-#:/<>".contains(c)
}

struct LineCursor<'a> {
    line_no: usize,
    text: &'a str,
    offset: usize,
}

impl<'a> LineCursor<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            line: self.line_no,
            column: self.text[..self.offset].chars().count() + 1,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.offset += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.offset..].chars().next()
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.offset >= self.text.len()
    }

    fn word(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.offset;
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                break;
            }
            self.offset += c.len_utf8();
        }
        (self.offset > start).then(|| &self.text[start..self.offset])
    }

    fn name(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.offset;
        while let Some(c) = self.peek() {
            if !is_name_char(c) {
                break;
            }
            self.offset += c.len_utf8();
        }
        let name = &self.text[start..self.offset];
        match name.chars().next() {
            None => Err(self.err("expected an arrow name")),
            Some(c) if c.is_ascii_digit() => {
                self.offset = start;
                Err(self.err("arrow names may not start with a digit"))
            }
            _ => Ok(name),
        }
    }

    fn integer(&mut self, what: &str) -> Result<i64> {
        let save = self.offset;
        let w = self.word().ok_or_else(|| self.err(format!("expected {what}")))?;
        w.parse().map_err(|_| {
            self.offset = save;
            self.skip_ws();
            self.err(format!("expected {what}, found `{w}`"))
        })
    }
}

/// Parses presentation source text.
pub fn parse_presentation(text: &str) -> Result<AlgebraPresentation> {
    let mut vertex_count: Option<usize> = None;
    let mut arrows: Vec<Arrow> = Vec::new();
    let mut raw_relations: Vec<(usize, usize, &str)> = Vec::new();
    let mut raw_duality: Vec<(usize, usize, &str, &str)> = Vec::new();
    let mut order: Option<Vec<usize>> = None;

    for (idx, full_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match full_line.find('#') {
            Some(p) => &full_line[..p],
            None => full_line,
        };
        let mut cur = LineCursor {
            line_no,
            text: line,
            offset: 0,
        };
        if cur.at_end() {
            continue;
        }
        let start = cur.offset;
        let keyword = cur.word().unwrap();
        match keyword {
            "vertices:" => {
                let r = cur.integer("a vertex count")?;
                if r <= 0 {
                    return Err(cur.err("vertex count must be positive"));
                }
                if vertex_count.is_some() {
                    return Err(cur.err("vertices declared twice"));
                }
                vertex_count = Some(r as usize);
            }
            "arrow" => {
                let name = cur.name()?.to_string();
                let n = vertex_count.ok_or_else(|| cur.err("declare `vertices:` first"))?;
                let endpoint = |cur: &mut LineCursor| -> Result<usize> {
                    let v = cur.integer("a vertex")?;
                    if v < 1 || v as usize > n {
                        return Err(cur.err(format!("vertex {v} outside 1..{n}")));
                    }
                    Ok(v as usize - 1)
                };
                let source = endpoint(&mut cur)?;
                let target = endpoint(&mut cur)?;
                let degree = if cur.at_end() {
                    None
                } else {
                    let d = cur.integer("an arrow degree")?;
                    if d < 0 {
                        return Err(cur.err("arrow degrees must be nonnegative"));
                    }
                    Some(d)
                };
                if arrows.iter().any(|a| a.name == name) {
                    return Err(cur.err(format!("arrow `{name}` declared twice")));
                }
                arrows.push(Arrow {
                    name,
                    source,
                    target,
                    degree,
                });
            }
            "relation" => {
                cur.skip_ws();
                raw_relations.push((line_no, cur.offset, line));
                continue;
            }
            "duality" => {
                let a = cur.name()?;
                let arrow_tok = cur.word();
                if arrow_tok != Some("<->") {
                    return Err(cur.err("expected `<->`"));
                }
                let b = cur.name()?;
                raw_duality.push((line_no, cur.offset, a, b));
            }
            "order:" => {
                let n = vertex_count.ok_or_else(|| cur.err("declare `vertices:` first"))?;
                let mut o = Vec::new();
                while !cur.at_end() {
                    let v = cur.integer("a vertex")?;
                    if v < 1 || v as usize > n {
                        return Err(cur.err(format!("vertex {v} outside 1..{n}")));
                    }
                    o.push(v as usize - 1);
                }
                order = Some(o);
            }
            _ => {
                cur.offset = start;
                return Err(cur.err(format!("unknown directive `{keyword}`")));
            }
        }
        if !cur.at_end() {
            return Err(cur.err("unexpected trailing input"));
        }
    }

    let vertex_count = vertex_count.ok_or(Error::Syntax {
        line: 1,
        column: 1,
        message: "missing `vertices:` declaration".into(),
    })?;
    let names: HashMap<&str, usize> = arrows
        .iter()
        .enumerate()
        .map(|(i, a)| (a.name.as_str(), i))
        .collect();

    let mut relations = Vec::new();
    for (line_no, offset, line) in raw_relations {
        relations.push(parse_relation(line_no, line, offset, &names)?);
    }

    let duality = if raw_duality.is_empty() {
        None
    } else {
        let mut d: Vec<Option<usize>> = vec![None; arrows.len()];
        for (_, _, a, b) in &raw_duality {
            let ia = *names.get(a).ok_or_else(|| Error::UnknownArrow(a.to_string()))?;
            let ib = *names.get(b).ok_or_else(|| Error::UnknownArrow(b.to_string()))?;
            for (x, y) in [(ia, ib), (ib, ia)] {
                if let Some(prev) = d[x] {
                    if prev != y {
                        return Err(Error::BadDuality(format!(
                            "`{}` paired twice",
                            arrows[x].name
                        )));
                    }
                }
                d[x] = Some(y);
            }
        }
        let mut full = Vec::with_capacity(d.len());
        for (i, x) in d.into_iter().enumerate() {
            full.push(x.ok_or_else(|| {
                Error::BadDuality(format!("arrow `{}` has no partner", arrows[i].name))
            })?);
        }
        Some(full)
    };

    let p = AlgebraPresentation {
        vertex_count,
        arrows,
        relations,
        order: order.unwrap_or_else(|| (0..vertex_count).collect()),
        duality,
    };
    p.validate()?;
    Ok(p)
}

fn parse_relation(
    line_no: usize,
    line: &str,
    offset: usize,
    names: &HashMap<&str, usize>,
) -> Result<Relation> {
    let mut cur = LineCursor {
        line_no,
        text: line,
        offset,
    };
    // Terms keep their first-appearance order.
    let mut acc: Vec<(Path, BigRational)> = Vec::new();
    let mut first = true;
    loop {
        cur.skip_ws();
        let mut sign = BigRational::one();
        match cur.peek() {
            Some('+') if !first => cur.offset += 1,
            Some('-') => {
                cur.offset += 1;
                sign = -sign;
            }
            None if !first => break,
            _ if first => {}
            Some(_) => return Err(cur.err("expected `+` or `-` between terms")),
            None => break,
        }
        first = false;
        cur.skip_ws();
        // Optional coefficient: digits with optional /digits, followed by `*`.
        let mut coef = BigRational::one();
        if cur.peek().is_some_and(|c| c.is_ascii_digit()) {
            let start = cur.offset;
            while cur
                .peek()
                .is_some_and(|c| c.is_ascii_digit() || c == '/' || c == ' ')
            {
                cur.offset += 1;
            }
            let lit = line[start..cur.offset].trim();
            coef = parse_rational(lit).ok_or_else(|| {
                let mut c = LineCursor { line_no, text: line, offset: start };
                c.skip_ws();
                c.err(format!("bad coefficient `{lit}`"))
            })?;
            cur.skip_ws();
            if cur.peek() != Some('*') {
                return Err(cur.err("expected `*` after coefficient"));
            }
            cur.offset += 1;
        }
        let mut path_rev = Vec::new();
        loop {
            cur.skip_ws();
            let name = cur.name()?;
            let idx = *names
                .get(name)
                .ok_or_else(|| Error::UnknownArrow(name.to_string()))?;
            path_rev.push(idx);
            cur.skip_ws();
            if cur.peek() == Some('.') {
                cur.offset += 1;
            } else {
                break;
            }
        }
        path_rev.reverse();
        match acc.iter_mut().find(|(q, _)| *q == path_rev) {
            Some((_, c)) => *c += sign * coef,
            None => acc.push((path_rev, sign * coef)),
        }
    }
    let terms: Vec<(BigRational, Path)> = acc
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(p, c)| (c, p))
        .collect();
    Ok(Relation { terms })
}

#[cfg(test)]
mod tests {
    use super::*;

    const CATO_LIKE: &str = "
        vertices: 3
        arrow a 1 2
        arrow a' 2 1
        arrow b 2 3
        arrow b' 3 2
        relation a.a' - b'.b   # at vertex 2
        relation b.b'
        duality a <-> a'
        duality b <-> b'
    ";

    #[test]
    fn parses_and_round_trips() {
        let p = parse_presentation(CATO_LIKE).unwrap();
        assert_eq!(p.vertex_count, 3);
        assert_eq!(p.arrows.len(), 4);
        assert_eq!(p.relations.len(), 2);
        assert_eq!(p.order, vec![0, 1, 2]);
        let again = parse_presentation(&p.to_text()).unwrap();
        assert_eq!(p, again);
    }

    #[test]
    fn right_to_left_composition() {
        let p = parse_presentation(
            "vertices: 3\narrow a 1 2\narrow b 2 3\nrelation b.a\n",
        )
        .unwrap();
        let rel = &p.relations[0];
        assert_eq!(rel.terms[0].1, vec![0, 1]);
        assert_eq!(p.path_source(&rel.terms[0].1), Some(0));
        assert_eq!(p.path_target(&rel.terms[0].1), Some(2));
    }

    #[test]
    fn single_vertex_no_arrows() {
        let p = parse_presentation("vertices: 1").unwrap();
        assert_eq!(p.vertex_count, 1);
        assert!(p.arrows.is_empty());
    }

    #[test]
    fn rejects_bad_input() {
        let err = parse_presentation("vertices: 2\narrow a 1 2\nrelation a.c").unwrap_err();
        assert_eq!(err, Error::UnknownArrow("c".into()));

        let err = parse_presentation("vertices: 2\narrow a 1 2\narrow b 2 1\nrelation a.a").unwrap_err();
        assert!(matches!(err, Error::BadRelation { .. }), "{err}");

        let err = parse_presentation(
            "vertices: 2\narrow a 1 2\narrow b 2 1\nrelation b.a - a.b",
        )
        .unwrap_err();
        assert!(matches!(err, Error::BadRelation { .. }), "{err}");

        let err = parse_presentation(
            "vertices: 1\narrow x 1 1\nrelation x.x - x.x.x",
        )
        .unwrap_err();
        assert!(err.to_string().contains("inhomogeneous"), "{err}");

        let err = parse_presentation(
            "vertices: 2\narrow a 1 2\narrow b 2 1\narrow c 1 2\nduality a <-> b",
        )
            .unwrap_err();
        assert!(matches!(err, Error::BadDuality(_)), "{err}");

        let err = parse_presentation("vertices: 2\nfrobnicate\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, column: 1, .. }), "{err}");
    }

    #[test]
    fn coefficients_and_cancellation() {
        let p = parse_presentation(
            "vertices: 1\narrow x 1 1\narrow y 1 1\nrelation 2*x.y - 1/2*y.x + x.y",
        )
        .unwrap();
        let rel = &p.relations[0];
        assert_eq!(rel.terms.len(), 2);
        assert_eq!(p.format_relation(rel), "3*x.y - 1/2*y.x");
        let err = parse_presentation("vertices: 1\narrow x 1 1\nrelation x.x - x.x").unwrap_err();
        assert!(err.to_string().contains("zero"));
    }

    #[test]
    fn self_paired_loop_allowed() {
        let p = parse_presentation("vertices: 1\narrow x 1 1\nrelation x.x.x\nduality x <-> x")
            .unwrap();
        assert_eq!(p.duality, Some(vec![0]));
    }
}
