//! The line-oriented input format. Every declaration is parsed and built
//! as soon as it is read, so later lines can refer to earlier names.

use std::collections::BTreeMap;

use crate::divisor::FractionalIdealRecord;
use crate::error::{Error, Result};
use crate::etale::{EtalePresentation, RingMapRecord};
use crate::field::Field;
use crate::module::{FPModule, Matrix};
use crate::parse::parse_poly_at;
use crate::poly::Poly;
use crate::primes::PrimeRecord;
use crate::ring::{IdealRecord, PolyRing, QuotientRing};
use crate::stack::{build_group_groupoid, EquivariantModule, GroupActionGroupoid};

#[derive(Clone, Debug, Default)]
pub struct ParseOptions {
    /// Accept every declared prime without verifying primality.
    pub trust_primes: bool,
}

#[derive(Clone, Debug)]
pub enum Entity {
    Field(Field),
    Ring(QuotientRing),
    Ideal { ring: String, ideal: IdealRecord },
    Prime { ring: String, prime: PrimeRecord },
    Module { ring: String, module: FPModule },
    Map { source: String, target: String, map: RingMapRecord },
    Etale { map: String, presentation: EtalePresentation, jacobian: Option<Poly> },
    Group(Vec<Vec<String>>),
    Action { group: String, ring: String, groupoid: GroupActionGroupoid },
    Equivariant { module: String, action: String, equivariant: EquivariantModule },
    Divisor { ring: String, source: DivisorSource },
    StackDivisor { action: String, source: StackSource },
}

impl Entity {
    pub fn kind(&self) -> &'static str {
        match self {
            Entity::Field(_) => "field",
            Entity::Ring(_) => "ring",
            Entity::Ideal { .. } => "ideal",
            Entity::Prime { .. } => "prime",
            Entity::Module { .. } => "module",
            Entity::Map { .. } => "map",
            Entity::Etale { .. } => "etale",
            Entity::Group(_) => "group",
            Entity::Action { .. } => "action",
            Entity::Equivariant { .. } => "equivariant",
            Entity::Divisor { .. } => "divisor",
            Entity::StackDivisor { .. } => "stackdivisor",
        }
    }
}

#[derive(Clone, Debug)]
pub enum DivisorSource {
    Module(String),
    Fractional(FractionalIdealRecord),
}

#[derive(Clone, Debug)]
pub enum StackSource {
    Equivariant(String),
    Invariant(String),
}

/// What an `assert` line asks for. Names refer to earlier declarations.
#[derive(Clone, Debug)]
pub enum Check {
    Member { ideal: String, f: Poly },
    Reflexive { module: String },
    FreeRankOne { module: String, prime: String },
    Nzd { ring: String, f: Poly },
    Gorenstein { ring: String, prime: String },
    Condition { serre: bool, subject: String, r: usize, primes: Vec<String> },
    Embedded { subject: String },
    Etale { etale: String, primes: Vec<String> },
    LocalFormulas { etale: String, primes: Vec<String> },
    NzdTransport { map: String, f: Poly },
    Image { map: String, f: Poly, bound: Option<u32> },
    Saturation { map: String, prime: String, bound: Option<u32>, extra: Vec<Poly> },
    ReflexivePullback { module: String, etale: String, primes: Vec<String> },
    HomPullback { module: String, etale: String, primes: Vec<String> },
    Divisor { divisor: String },
    Effective { divisor: String, bound: Option<u32>, expect: Option<IdealRecord> },
    Subscheme { divisor: String, bound: Option<u32>, expect: Option<IdealRecord> },
    Section { divisor: String, s: Vec<Poly>, expect: Option<IdealRecord> },
    Equivalent { first: String, second: String, bound: Option<u32>, primes: Vec<String> },
    Cocycle { equivariant: String },
    Descent { from: String, to: String, map: String, matrix: Matrix },
    StackDivisor { equivariant: String },
    Invariants { equivariant: String, bound: Option<u32>, expect: Option<Vec<Poly>> },
    Substack { divisor: String, bound: Option<u32>, expect: Option<IdealRecord> },
    StackSection { divisor: String, s: Vec<Poly>, expect: Option<IdealRecord> },
}

pub const ASSERT_KINDS: &[&str] = &[
    "member",
    "reflexive",
    "free-rank-one",
    "nzd",
    "gorenstein",
    "gr",
    "sr",
    "embedded",
    "etale",
    "local-formulas",
    "nzd-transport",
    "image",
    "saturation",
    "reflexive-pullback",
    "hom-pullback",
    "divisor",
    "effective",
    "subscheme",
    "section",
    "equivalent",
    "cocycle",
    "descent",
    "stack-divisor",
    "invariants",
    "substack",
    "stack-section",
];

#[derive(Clone, Debug)]
pub struct Assertion {
    pub line: usize,
    pub negated: bool,
    pub kind: String,
    pub check: Check,
    pub canonical: String,
}

#[derive(Clone, Debug)]
pub enum Item {
    Blank,
    Comment(String),
    Decl { line: usize, name: String, canonical: String },
    Assert(Assertion),
}

#[derive(Clone, Debug)]
pub struct Document {
    pub source: String,
    pub options: ParseOptions,
    pub items: Vec<Item>,
    pub entities: BTreeMap<String, Entity>,
}

impl Document {
    pub fn assertions(&self) -> impl Iterator<Item = &Assertion> {
        self.items.iter().filter_map(|i| match i {
            Item::Assert(a) => Some(a),
            _ => None,
        })
    }

    pub fn get(&self, name: &str) -> Option<&Entity> {
        self.entities.get(name)
    }

    /// Canonical reprint: one normalized line per declaration, comments
    /// kept, runs of blank lines collapsed.
    pub fn canonical(&self) -> String {
        let mut out = String::new();
        let mut blank = true;
        for item in &self.items {
            match item {
                Item::Blank => {
                    if !blank {
                        out.push('\n');
                    }
                    blank = true;
                    continue;
                }
                Item::Comment(c) => out.push_str(c),
                Item::Decl { canonical, .. } => out.push_str(canonical),
                Item::Assert(a) => out.push_str(&a.canonical),
            }
            out.push('\n');
            blank = false;
        }
        while out.ends_with("\n\n") {
            out.pop();
        }
        out
    }

    pub fn ring(&self, name: &str) -> Result<&QuotientRing> {
        match self.get(name) {
            Some(Entity::Ring(r)) => Ok(r),
            _ => Err(Error::Malformed(format!("{} is not a ring", name))),
        }
    }

    pub fn prime(&self, name: &str) -> Result<&PrimeRecord> {
        match self.get(name) {
            Some(Entity::Prime { prime, .. }) => Ok(prime),
            _ => Err(Error::Malformed(format!("{} is not a prime", name))),
        }
    }

    pub fn primes(&self, names: &[String]) -> Result<Vec<PrimeRecord>> {
        names.iter().map(|n| self.prime(n).cloned()).collect()
    }

    pub fn module(&self, name: &str) -> Result<&FPModule> {
        match self.get(name) {
            Some(Entity::Module { module, .. }) => Ok(module),
            _ => Err(Error::Malformed(format!("{} is not a module", name))),
        }
    }

    pub fn map(&self, name: &str) -> Result<&RingMapRecord> {
        match self.get(name) {
            Some(Entity::Map { map, .. }) => Ok(map),
            _ => Err(Error::Malformed(format!("{} is not a map", name))),
        }
    }

    pub fn equivariant(&self, name: &str) -> Result<&EquivariantModule> {
        match self.get(name) {
            Some(Entity::Equivariant { equivariant, .. }) => Ok(equivariant),
            _ => Err(Error::Malformed(format!("{} is not an equivariant module", name))),
        }
    }

    /// Ring of a ring, ideal, prime, module or divisor name.
    pub fn ring_of(&self, name: &str) -> Result<(String, &QuotientRing)> {
        let rname = match self.get(name) {
            Some(Entity::Ring(_)) => name.to_string(),
            Some(Entity::Ideal { ring, .. })
            | Some(Entity::Prime { ring, .. })
            | Some(Entity::Module { ring, .. })
            | Some(Entity::Divisor { ring, .. })
            | Some(Entity::Action { ring, .. }) => ring.clone(),
            Some(Entity::Map { target, .. }) => target.clone(),
            Some(Entity::Etale { map, .. }) => return self.ring_of(map),
            Some(Entity::Equivariant { module, .. }) => return self.ring_of(module),
            Some(Entity::StackDivisor { action, .. }) => return self.ring_of(action),
            _ => return Err(Error::Malformed(format!("{} has no ring", name))),
        };
        Ok((rname.clone(), self.ring(&rname)?))
    }
}

/// A piece of a line with the 1-based column of its first character.
#[derive(Clone, Debug)]
struct Piece {
    text: String,
    line: usize,
    col: usize,
}

impl Piece {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { line: self.line, col: self.col, msg: msg.into() })
    }

    fn trimmed(&self) -> Piece {
        let lead = self.text.chars().take_while(|c| c.is_whitespace()).count();
        let text: String = self.text.chars().skip(lead).collect::<String>().trim_end().to_string();
        Piece { text, line: self.line, col: self.col + lead }
    }

    fn sub(&self, start: usize, end: usize) -> Piece {
        let text: String = self.text.chars().skip(start).take(end - start).collect();
        Piece { text, line: self.line, col: self.col + start }
    }

    /// Splits at `sep` outside brackets; pieces are trimmed.
    fn split_top(&self, sep: char) -> Vec<Piece> {
        let chars: Vec<char> = self.text.chars().collect();
        let mut out = Vec::new();
        let (mut depth, mut start) = (0i32, 0);
        for (i, &c) in chars.iter().enumerate() {
            match c {
                '(' | '[' | '{' => depth += 1,
                ')' | ']' | '}' => depth -= 1,
                _ if c == sep && depth == 0 => {
                    out.push(self.sub(start, i).trimmed());
                    start = i + 1;
                }
                _ => {}
            }
        }
        out.push(self.sub(start, chars.len()).trimmed());
        out
    }

    /// Position of the first top-level occurrence of the word `kw`.
    fn find_word(&self, kw: &str) -> Option<usize> {
        let chars: Vec<char> = self.text.chars().collect();
        let k: Vec<char> = kw.chars().collect();
        let mut depth = 0i32;
        for i in 0..chars.len() {
            match chars[i] {
                '(' | '[' | '{' => depth += 1,
                ')' | ']' | '}' => depth -= 1,
                _ => {}
            }
            if depth == 0
                && chars[i..].starts_with(&k)
                && (i == 0 || chars[i - 1].is_whitespace())
                && chars.get(i + k.len()).map_or(true, |c| c.is_whitespace())
            {
                return Some(i);
            }
        }
        None
    }

    /// Splits around the first top-level word `kw`.
    fn split_word(&self, kw: &str) -> Option<(Piece, Piece)> {
        let i = self.find_word(kw)?;
        let n = self.text.chars().count();
        Some((self.sub(0, i).trimmed(), self.sub(i + kw.chars().count(), n).trimmed()))
    }

    fn words(&self) -> Vec<Piece> {
        let chars: Vec<char> = self.text.chars().collect();
        let mut out = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            if chars[i].is_whitespace() {
                i += 1;
                continue;
            }
            let start = i;
            while i < chars.len() && !chars[i].is_whitespace() {
                i += 1;
            }
            out.push(self.sub(start, i));
        }
        out
    }

    /// The inside of `open ... close` when the piece is exactly that.
    fn delimited(&self, open: &str, close: &str) -> Result<Piece> {
        let t = self.trimmed();
        if !t.text.starts_with(open) || !t.text.ends_with(close) || t.text.chars().count() < open.len() + close.len() {
            return t.err(format!("expected {}...{}", open, close));
        }
        let n = t.text.chars().count();
        Ok(t.sub(open.chars().count(), n - close.chars().count()))
    }

    fn name(&self) -> Result<String> {
        let t = self.trimmed();
        let ok = !t.text.is_empty()
            && t.text.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
            && t.text.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'');
        if ok {
            Ok(t.text)
        } else {
            t.err(format!("expected a name, found '{}'", t.text))
        }
    }

    fn number(&self) -> Result<u64> {
        let t = self.trimmed();
        t.text.parse().or_else(|_| t.err(format!("expected a number, found '{}'", t.text)))
    }
}

struct Builder {
    doc: Document,
}

fn show_list(ring: &QuotientRing, ps: &[Poly]) -> String {
    ps.iter().map(|p| ring.show(p)).collect::<Vec<_>>().join(", ")
}

fn show_matrix(ring: &QuotientRing, m: &Matrix) -> String {
    let rows: Vec<String> = (0..m.nrows()).map(|i| show_list(ring, &m.row(i))).collect();
    format!("[[{}]]", rows.join("; "))
}

impl Builder {
    fn resolve<'a>(&'a self, p: &Piece, want: &[&str]) -> Result<(String, &'a Entity)> {
        let name = p.name()?;
        match self.doc.entities.get(&name) {
            None => p.err(format!("unresolved reference '{}'", name)),
            Some(e) if want.is_empty() || want.contains(&e.kind()) => Ok((name, e)),
            Some(e) => p.err(format!("'{}' is a {}, expected {}", name, e.kind(), want.join(" or "))),
        }
    }

    fn ring(&self, p: &Piece) -> Result<(String, QuotientRing)> {
        match self.resolve(p, &["ring"])? {
            (n, Entity::Ring(r)) => Ok((n, r.clone())),
            _ => unreachable!(),
        }
    }

    fn poly(&self, ring: &PolyRing, p: &Piece) -> Result<Poly> {
        let t = p.trimmed();
        if t.text.is_empty() {
            return t.err("expected an expression");
        }
        parse_poly_at(ring, &t.text, t.line, t.col - 1)
    }

    fn poly_list(&self, ring: &PolyRing, p: &Piece) -> Result<Vec<Poly>> {
        let inner = p.delimited("(", ")")?;
        if inner.text.trim().is_empty() {
            return Ok(Vec::new());
        }
        inner.split_top(',').iter().map(|q| self.poly(ring, q)).collect()
    }

    fn matrix(&self, ring: &QuotientRing, p: &Piece) -> Result<(usize, Vec<Vec<Poly>>)> {
        let inner = p.delimited("[[", "]]")?;
        if inner.text.trim().is_empty() {
            return Ok((0, Vec::new()));
        }
        let rows: Vec<Vec<Poly>> = inner
            .split_top(';')
            .iter()
            .map(|r| r.split_top(',').iter().map(|e| self.poly(ring.ambient(), e)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let ncols = rows[0].len();
        if rows.iter().any(|r| r.len() != ncols) {
            return p.err("matrix rows have different lengths");
        }
        Ok((ncols, rows))
    }

    fn primes(&self, words: &[Piece]) -> Result<Vec<String>> {
        words.iter().map(|w| self.resolve(w, &["prime"]).map(|(n, _)| n)).collect()
    }

    fn declare(&mut self, line: usize, name_piece: &Piece, entity: Entity, canonical: String) -> Result<()> {
        let name = name_piece.name()?;
        if self.doc.entities.contains_key(&name) {
            return name_piece.err(format!("duplicate name '{}'", name));
        }
        self.doc.entities.insert(name.clone(), entity);
        self.doc.items.push(Item::Decl { line, name, canonical });
        Ok(())
    }

    fn line(&mut self, lineno: usize, raw: &str) -> Result<()> {
        let text = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        if text.trim().is_empty() {
            if raw.trim().is_empty() {
                self.doc.items.push(Item::Blank);
            } else {
                self.doc.items.push(Item::Comment(raw.trim().to_string()));
            }
            return Ok(());
        }
        let whole = Piece { text: text.to_string(), line: lineno, col: 1 }.trimmed();
        let (head, rest) = match whole.text.find(char::is_whitespace) {
            Some(_) => {
                let n = whole.text.chars().take_while(|c| !c.is_whitespace()).count();
                (whole.sub(0, n), whole.sub(n, whole.text.chars().count()).trimmed())
            }
            None => (whole.clone(), whole.sub(0, 0)),
        };
        match head.text.as_str() {
            "field" => self.field(lineno, &rest),
            "ring" => self.ring_decl(lineno, &rest),
            "ideal" | "prime" => self.ideal_decl(lineno, &rest, head.text == "prime"),
            "module" => self.module_decl(lineno, &rest),
            "map" => self.map_decl(lineno, &rest),
            "etale" => self.etale_decl(lineno, &rest),
            "group" => self.group_decl(lineno, &rest),
            "action" => self.action_decl(lineno, &rest),
            "equivariant" => self.equivariant_decl(lineno, &rest),
            "divisor" => self.divisor_decl(lineno, &rest),
            "stackdivisor" => self.stack_divisor_decl(lineno, &rest),
            "assert" => self.assert_decl(lineno, &rest),
            other => head.err(format!("unknown declaration '{}'", other)),
        }
    }

    fn eq_split(&self, p: &Piece) -> Result<(Piece, Piece)> {
        let chars: Vec<char> = p.text.chars().collect();
        match chars.iter().position(|&c| c == '=') {
            Some(i) => Ok((p.sub(0, i).trimmed(), p.sub(i + 1, chars.len()).trimmed())),
            None => p.err("expected '='"),
        }
    }

    fn field(&mut self, line: usize, rest: &Piece) -> Result<()> {
        let (name, body) = self.eq_split(rest)?;
        let words = body.words();
        let field = match words.iter().map(|w| w.text.as_str()).collect::<Vec<_>>().as_slice() {
            ["Q"] => Field::rationals(),
            ["Fp", _] => Field::prime(words[1].number()?).map_err(|e| Error::Syntax {
                line,
                col: words[1].col,
                msg: e.to_string(),
            })?,
            _ => return body.err("expected 'Q' or 'Fp <prime>'"),
        };
        let canonical = format!("field {} = {}", name.text, field);
        self.declare(line, &name, Entity::Field(field), canonical)
    }

    fn ring_decl(&mut self, line: usize, rest: &Piece) -> Result<()> {
        let (name, body) = self.eq_split(rest)?;
        let chars: Vec<char> = body.text.chars().collect();
        let open = chars.iter().position(|&c| c == '[').map_or_else(|| body.err("expected '['"), Ok)?;
        let close = chars.iter().position(|&c| c == ']').map_or_else(|| body.err("expected ']'"), Ok)?;
        let fpiece = body.sub(0, open).trimmed();
        let field = if fpiece.text == "Q" {
            Field::rationals()
        } else {
            match self.resolve(&fpiece, &["field"])? {
                (_, Entity::Field(f)) => *f,
                _ => unreachable!(),
            }
        };
        let vars: Vec<String> = body.sub(open + 1, close).split_top(',').iter().map(|v| v.name()).collect::<Result<_>>()?;
        let mut sorted = vars.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != vars.len() {
            return body.err("repeated variable name");
        }
        let names: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        let amb = PolyRing::new(field, &names);
        let tail = body.sub(close + 1, chars.len()).trimmed();
        let rels = if tail.text.is_empty() {
            Vec::new()
        } else {
            let t = tail.text.strip_prefix('/').map_or_else(|| tail.err("expected '/' before relations"), Ok)?;
            let p = Piece { text: t.to_string(), line, col: tail.col + 1 }.trimmed();
            self.poly_list(&amb, &p)?
        };
        let ring = QuotientRing::new(amb, rels.clone()).map_err(|e| match e {
            Error::ZeroRing => Error::Syntax { line, col: tail.col, msg: "improper relations ideal: the ring would be zero".into() },
            e => e,
        })?;
        let rel_txt = if rels.is_empty() { String::new() } else { format!(" / ({})", show_list(&ring, &rels)) };
        let canonical = format!("ring {} = {}[{}]{}", name.text, fpiece.text, vars.join(", "), rel_txt);
        self.declare(line, &name, Entity::Ring(ring), canonical)
    }

    fn ideal_decl(&mut self, line: usize, rest: &Piece, prime: bool) -> Result<()> {
        let (lhs, body) = self.eq_split(rest)?;
        let (name, rpiece) = lhs.split_word("in").map_or_else(|| lhs.err("expected 'NAME in RING'"), Ok)?;
        let (rname, ring) = self.ring(&rpiece)?;
        let words = body.trimmed();
        let (list, trusted) = match words.text.strip_suffix("trusted") {
            Some(t) if prime => (Piece { text: t.to_string(), line, col: words.col }.trimmed(), true),
            _ => (words.clone(), false),
        };
        let gens = self.poly_list(ring.ambient(), &list)?;
        let gens_txt = show_list(&ring, &gens);
        if prime {
            let rec = if trusted || self.doc.options.trust_primes {
                PrimeRecord::trusted(&ring, gens)
            } else {
                PrimeRecord::declared(&ring, gens)
            };
            let prime = rec.map_err(|e| {
                let hint = if matches!(e, Error::UnsupportedIdealClass(_)) { " (mark it 'trusted' to skip verification)" } else { "" };
                Error::Syntax { line, col: list.col, msg: format!("{}{}", e, hint) }
            })?;
            let canonical = format!("prime {} in {} = ({}){}", name.text, rname, gens_txt, if trusted { " trusted" } else { "" });
            self.declare(line, &name, Entity::Prime { ring: rname, prime }, canonical)
        } else {
            let ideal = ring.ideal(gens)?;
            let canonical = format!("ideal {} in {} = ({})", name.text, rname, gens_txt);
            self.declare(line, &name, Entity::Ideal { ring: rname, ideal }, canonical)
        }
    }

    fn module_decl(&mut self, line: usize, rest: &Piece) -> Result<()> {
        let (lhs, body) = self.eq_split(rest)?;
        let (name, rpiece) = lhs.split_word("over").map_or_else(|| lhs.err("expected 'NAME over RING'"), Ok)?;
        let (rname, ring) = self.ring(&rpiece)?;
        let words = body.words();
        let head = words.first().map(|w| w.text.as_str()).unwrap_or("");
        let arg = body.sub(head.chars().count(), body.text.chars().count()).trimmed();
        let (module, txt) = match head {
            "coker" => {
                let (mat, gens) = match arg.split_word("gens") {
                    Some((m, g)) => (m, Some(g.number()? as usize)),
                    None => (arg.clone(), None),
                };
                let (ncols, rows) = self.matrix(&ring, &mat)?;
                let nrows = match gens {
                    Some(g) if !rows.is_empty() && g != rows.len() => {
                        return mat.err(format!("matrix has {} rows but gens is {}", rows.len(), g));
                    }
                    Some(g) => g,
                    None if rows.is_empty() => return mat.err("an empty matrix needs 'gens <g>'"),
                    None => rows.len(),
                };
                let m = if rows.is_empty() { Matrix::empty(nrows) } else { Matrix::from_rows(ncols, rows) };
                let module = FPModule::new(&ring, nrows, m.clone()).map_err(|e| Error::Syntax { line, col: mat.col, msg: e.to_string() })?;
                let txt = if m.ncols() == 0 { format!("coker [[]] gens {}", nrows) } else { format!("coker {} gens {}", show_matrix(&ring, &m), nrows) };
                (module, txt)
            }
            "ideal" => {
                let gens = self.poly_list(ring.ambient(), &arg)?;
                if gens.iter().all(|g| ring.is_zero(g)) {
                    return arg.err("the zero ideal has no useful presentation here");
                }
                let txt = format!("ideal ({})", show_list(&ring, &gens));
                (FPModule::from_ideal(&ring, &gens), txt)
            }
            "free" => {
                let n = arg.number()? as usize;
                (FPModule::free(&ring, n), format!("free {}", n))
            }
            _ => return body.err("expected 'coker', 'ideal' or 'free'"),
        };
        let canonical = format!("module {} over {} = {}", name.text, rname, txt);
        self.declare(line, &name, Entity::Module { ring: rname, module }, canonical)
    }

    /// `v -> e` pairs in the ring `images_in`, keyed by variable of `vars_of`.
    fn substitution(&self, vars_of: &QuotientRing, images_in: &QuotientRing, items: &[Piece]) -> Result<Vec<Poly>> {
        let mut images: Vec<Option<Poly>> = vec![None; vars_of.nvars()];
        for it in items {
            let chars: Vec<char> = it.text.chars().collect();
            let arrow = it.text.find("->").map_or_else(|| it.err("expected 'v -> e'"), Ok)?;
            let arrow = it.text[..arrow].chars().count();
            let v = it.sub(0, arrow).trimmed();
            let vi = vars_of.names().iter().position(|n| *n == v.text).map_or_else(|| v.err(format!("unknown variable '{}'", v.text)), Ok)?;
            if images[vi].is_some() {
                return v.err(format!("variable '{}' assigned twice", v.text));
            }
            images[vi] = Some(self.poly(images_in.ambient(), &it.sub(arrow + 2, chars.len()))?);
        }
        Ok(images.into_iter().enumerate().map(|(i, p)| p.unwrap_or_else(|| images_in.var(i))).collect())
    }

    fn map_decl(&mut self, line: usize, rest: &Piece) -> Result<()> {
        let chars: Vec<char> = rest.text.chars().collect();
        let colon = chars.iter().position(|&c| c == ':').map_or_else(|| rest.err("expected ':'"), Ok)?;
        let name = rest.sub(0, colon).trimmed();
        let body = rest.sub(colon + 1, chars.len()).trimmed();
        let (rings, subst) = body.split_word("on").map_or_else(|| body.err("expected 'on'"), Ok)?;
        let (sp, tp) = rings.split_word("->").map_or_else(|| rings.err("expected 'R1 -> R2'"), Ok)?;
        let (sname, source) = self.ring(&sp)?;
        let (tname, target) = self.ring(&tp)?;
        let items = subst.split_top(',');
        for it in &items {
            let v = it.text.split("->").next().unwrap_or("").trim();
            if source.names().iter().all(|n| n != v) {
                return it.err(format!("unknown source variable '{}'", v));
            }
        }
        let mut images = Vec::new();
        for v in source.names() {
            let it = items.iter().find(|it| it.text.split("->").next().unwrap_or("").trim() == v);
            match it {
                Some(it) => {
                    let arrow = it.text[..it.text.find("->").unwrap()].chars().count();
                    images.push(self.poly(target.ambient(), &it.sub(arrow + 2, it.text.chars().count()))?);
                }
                None => return subst.err(format!("no image for source variable '{}'", v)),
            }
        }
        let map = RingMapRecord::new(&source, &target, images.clone()).map_err(|e| Error::Syntax { line, col: subst.col, msg: e.to_string() })?;
        let txt: Vec<String> = source.names().iter().zip(&images).map(|(v, p)| format!("{} -> {}", v, target.show(p))).collect();
        let canonical = format!("map {} : {} -> {} on {}", name.text, sname, tname, txt.join(", "));
        self.declare(line, &name, Entity::Map { source: sname, target: tname, map }, canonical)
    }

    fn etale_decl(&mut self, line: usize, rest: &Piece) -> Result<()> {
        let (name, body) = match rest.split_word("presentation") {
            Some(x) => x,
            None => return rest.err("expected 'presentation'"),
        };
        let (head, mut name) = (name.clone(), name);
        let mut map_name = None;
        let mut new_vars = None;
        if let Some((n, tail)) = head.split_word("of") {
            name = n;
            let (m, nv) = match tail.split_word("new") {
                Some((m, nv)) => (m, Some(nv)),
                None => (tail, None),
            };
            map_name = Some(self.resolve(&m, &["map"])?.0);
            if let Some(nv) = nv {
                new_vars = Some(nv.split_top(',').iter().map(|v| v.name()).collect::<Result<Vec<_>>>()?);
            }
        }
        let map_name = match map_name {
            Some(m) => m,
            None => self
                .doc
                .items
                .iter()
                .rev()
                .find_map(|i| match i {
                    Item::Decl { name, .. } if matches!(self.doc.entities.get(name), Some(Entity::Map { .. })) => Some(name.clone()),
                    _ => None,
                })
                .map_or_else(|| rest.err("no map declared before this presentation"), Ok)?,
        };
        let map = match self.doc.entities.get(&map_name) {
            Some(Entity::Map { map, .. }) => map.clone(),
            _ => unreachable!(),
        };
        let new_vars = new_vars.unwrap_or_else(|| {
            map.target.names().iter().filter(|v| !map.source.names().contains(v)).cloned().collect()
        });
        let (rels, jac) = match body.split_word("jacobian") {
            Some((r, j)) => (r, Some(j)),
            None => (body, None),
        };
        let amb = EtalePresentation::ambient(&map.source, &new_vars);
        let relations = self.poly_list(&amb, &rels)?;
        let jacobian = match &jac {
            Some(j) => Some(self.poly(map.target.ambient(), j)?),
            None => None,
        };
        let cring = QuotientRing::new(amb, vec![]).expect("polynomial ring");
        let mut canonical = format!("etale {} of {}", name.text, map_name);
        if !new_vars.is_empty() {
            canonical.push_str(&format!(" new {}", new_vars.join(", ")));
        }
        canonical.push_str(&format!(" presentation ({})", show_list(&cring, &relations)));
        if let Some(j) = &jacobian {
            canonical.push_str(&format!(" jacobian {}", map.target.show(j)));
        }
        let presentation = EtalePresentation { new_vars, relations };
        self.declare(line, &name, Entity::Etale { map: map_name, presentation, jacobian }, canonical)
    }

    fn group_decl(&mut self, line: usize, rest: &Piece) -> Result<()> {
        let (name, body) = self.eq_split(rest)?;
        let inner = body.delimited("table{", "}")?;
        let table: Vec<Vec<String>> =
            inner.split_top(';').iter().map(|r| r.split_top(',').iter().map(|e| e.text.clone()).collect()).collect();
        if table.iter().flatten().any(|e| e.is_empty() || e.contains(char::is_whitespace) || e.contains(':')) {
            return inner.err("group elements must be nonempty words without ':'");
        }
        let rows: Vec<String> = table.iter().map(|r| r.join(", ")).collect();
        let canonical = format!("group {} = table{{{}}}", name.text, rows.join("; "));
        self.declare(line, &name, Entity::Group(table), canonical)
    }

    /// Splits `g1: a, b, g2: c` into per-element item lists.
    fn element_items(&self, body: &Piece) -> Result<Vec<(Piece, Vec<Piece>)>> {
        let mut out: Vec<(Piece, Vec<Piece>)> = Vec::new();
        for it in body.split_top(',') {
            let chars: Vec<char> = it.text.chars().collect();
            let mut depth = 0;
            let mut colon = None;
            for (i, &c) in chars.iter().enumerate() {
                match c {
                    '(' | '[' | '{' => depth += 1,
                    ')' | ']' | '}' => depth -= 1,
                    ':' if depth == 0 => {
                        colon = Some(i);
                        break;
                    }
                    _ => {}
                }
            }
            match colon {
                Some(i) => out.push((it.sub(0, i).trimmed(), vec![it.sub(i + 1, chars.len()).trimmed()])),
                None => match out.last_mut() {
                    Some(last) => last.1.push(it),
                    None => return it.err("expected 'element: ...'"),
                },
            }
        }
        Ok(out)
    }

    fn action_decl(&mut self, line: usize, rest: &Piece) -> Result<()> {
        let (name, tail) = rest.split_word("of").map_or_else(|| rest.err("expected 'of GROUP'"), Ok)?;
        let (gp, tail) = tail.split_word("on").map_or_else(|| tail.err("expected 'on RING'"), Ok)?;
        let chars: Vec<char> = tail.text.chars().collect();
        let colon = chars.iter().position(|&c| c == ':').map_or_else(|| tail.err("expected ':'"), Ok)?;
        let rp = tail.sub(0, colon).trimmed();
        let body = tail.sub(colon + 1, chars.len()).trimmed();
        let (gname, table) = match self.resolve(&gp, &["group"])? {
            (n, Entity::Group(t)) => (n, t.clone()),
            _ => unreachable!(),
        };
        let (rname, ring) = self.ring(&rp)?;
        let elements = table[0].clone();
        let mut actions: Vec<Vec<Poly>> = vec![(0..ring.nvars()).map(|i| ring.var(i)).collect(); elements.len()];
        let mut given = vec![false; elements.len()];
        for (g, items) in self.element_items(&body)? {
            let gi = elements.iter().position(|e| *e == g.text).map_or_else(|| g.err(format!("unknown group element '{}'", g.text)), Ok)?;
            if given[gi] {
                return g.err(format!("element '{}' given twice", g.text));
            }
            given[gi] = true;
            actions[gi] = self.substitution(&ring, &ring, &items)?;
        }
        let groupoid = build_group_groupoid(&ring, &table, actions.clone()).map_err(|e| Error::Syntax { line, col: body.col, msg: e.to_string() })?;
        let parts: Vec<String> = elements
            .iter()
            .zip(&actions)
            .map(|(g, im)| {
                let s: Vec<String> = ring.names().iter().zip(im).map(|(v, p)| format!("{} -> {}", v, ring.show(p))).collect();
                format!("{}: {}", g, s.join(", "))
            })
            .collect();
        let canonical = format!("action {} of {} on {} : {}", name.text, gname, rname, parts.join(", "));
        self.declare(line, &name, Entity::Action { group: gname, ring: rname, groupoid }, canonical)
    }

    fn action_for(&self, ring_name: &str, explicit: Option<&Piece>, at: &Piece) -> Result<(String, GroupActionGroupoid)> {
        if let Some(p) = explicit {
            return match self.resolve(p, &["action"])? {
                (n, Entity::Action { groupoid, ring, .. }) if ring == ring_name => Ok((n, groupoid.clone())),
                (n, _) => p.err(format!("action '{}' is not on ring {}", n, ring_name)),
            };
        }
        let found: Vec<(&String, &GroupActionGroupoid)> = self
            .doc
            .entities
            .iter()
            .filter_map(|(n, e)| match e {
                Entity::Action { ring, groupoid, .. } if ring == ring_name => Some((n, groupoid)),
                _ => None,
            })
            .collect();
        match found.as_slice() {
            [(n, g)] => Ok(((*n).clone(), (*g).clone())),
            [] => at.err(format!("no action declared on ring {}", ring_name)),
            _ => at.err("several actions on this ring; name one with 'under ACTION'"),
        }
    }

    fn equivariant_decl(&mut self, line: usize, rest: &Piece) -> Result<()> {
        let (name, body) = self.eq_split(rest)?;
        let (head, phis_p) = match body.split_word("with") {
            Some((h, p)) => (h, Some(p)),
            None => (body.clone(), None),
        };
        let (mp, under) = match head.split_word("under") {
            Some((m, u)) => (m, Some(u)),
            None => (head.clone(), None),
        };
        let (mname, module, rname) = match self.resolve(&mp, &["module"])? {
            (n, Entity::Module { module, ring }) => (n, module.clone(), ring.clone()),
            _ => unreachable!(),
        };
        let (aname, groupoid) = self.action_for(&rname, under.as_ref(), &mp)?;
        let ring = module.ring().clone();
        let n = module.num_gens();
        let mut phis = vec![Matrix::identity(&ring, n); groupoid.order()];
        if let Some(pp) = &phis_p {
            for (g, items) in self.element_items(pp)? {
                let gi = groupoid.element_index(&g.text).map_or_else(|| g.err(format!("unknown group element '{}'", g.text)), Ok)?;
                if items.len() != 1 {
                    return g.err("expected one matrix per element");
                }
                let (ncols, rows) = self.matrix(&ring, &items[0])?;
                if rows.len() != n || ncols != n {
                    return items[0].err(format!("expected a {}x{} matrix", n, n));
                }
                phis[gi] = Matrix::from_rows(n, rows);
            }
        }
        let equivariant =
            EquivariantModule::new(&groupoid, &module, phis.clone()).map_err(|e| Error::Syntax { line, col: body.col, msg: e.to_string() })?;
        let parts: Vec<String> = groupoid.elements.iter().zip(&phis).map(|(g, m)| format!("{}: {}", g, show_matrix(&ring, m))).collect();
        let canonical = format!("equivariant {} = {} under {} with {}", name.text, mname, aname, parts.join(", "));
        self.declare(line, &name, Entity::Equivariant { module: mname, action: aname, equivariant }, canonical)
    }

    fn divisor_decl(&mut self, line: usize, rest: &Piece) -> Result<()> {
        let (lhs, body) = self.eq_split(rest)?;
        if let Some((name, rp)) = lhs.split_word("in") {
            let (rname, ring) = self.ring(&rp)?;
            let chars: Vec<char> = body.text.chars().collect();
            let close = chars.iter().rposition(|&c| c == ')').map_or_else(|| body.err("expected '(numerators) / d'"), Ok)?;
            let nums = self.poly_list(ring.ambient(), &body.sub(0, close + 1))?;
            let tail = body.sub(close + 1, chars.len()).trimmed();
            let den = match tail.text.strip_prefix('/') {
                Some(d) => self.poly(ring.ambient(), &Piece { text: d.to_string(), line, col: tail.col + 1 })?,
                None if tail.text.is_empty() => ring.one(),
                None => return tail.err("expected '/ denominator'"),
            };
            let rec = FractionalIdealRecord::new(&ring, nums, den).map_err(|e| Error::Syntax { line, col: body.col, msg: e.to_string() })?;
            let canonical = format!(
                "divisor {} in {} = ({}) / {}",
                name.text,
                rname,
                show_list(&ring, &rec.numerators),
                ring.show(&rec.denominator)
            );
            return self.declare(line, &name, Entity::Divisor { ring: rname, source: DivisorSource::Fractional(rec) }, canonical);
        }
        let (mname, rname) = match self.resolve(&body, &["module"])? {
            (n, Entity::Module { ring, .. }) => (n, ring.clone()),
            _ => unreachable!(),
        };
        let canonical = format!("divisor {} = {}", lhs.text, mname);
        self.declare(line, &lhs, Entity::Divisor { ring: rname, source: DivisorSource::Module(mname) }, canonical)
    }

    fn stack_divisor_decl(&mut self, line: usize, rest: &Piece) -> Result<()> {
        let (name, body) = self.eq_split(rest)?;
        if let Some(inv) = body.text.strip_prefix("invariant") {
            let p = Piece { text: inv.to_string(), line, col: body.col + 9 }.trimmed();
            let (ip, ap) = p.split_word("under").map_or_else(|| p.err("expected 'invariant IDEAL under ACTION'"), Ok)?;
            let (iname, iring) = match self.resolve(&ip, &["ideal"])? {
                (n, Entity::Ideal { ring, .. }) => (n, ring.clone()),
                _ => unreachable!(),
            };
            let (aname, _) = self.action_for(&iring, Some(&ap), &ap)?;
            let canonical = format!("stackdivisor {} = invariant {} under {}", name.text, iname, aname);
            return self.declare(line, &name, Entity::StackDivisor { action: aname, source: StackSource::Invariant(iname) }, canonical);
        }
        let (ename, aname) = match self.resolve(&body, &["equivariant"])? {
            (n, Entity::Equivariant { action, .. }) => (n, action.clone()),
            _ => unreachable!(),
        };
        let canonical = format!("stackdivisor {} = {}", name.text, ename);
        self.declare(line, &name, Entity::StackDivisor { action: aname, source: StackSource::Equivariant(ename) }, canonical)
    }

    fn assert_decl(&mut self, line: usize, rest: &Piece) -> Result<()> {
        let words = rest.words();
        let mut idx = 0;
        let negated = words.first().is_some_and(|w| w.text == "not");
        if negated {
            idx = 1;
        }
        let kw = words.get(idx).map_or_else(|| rest.err("expected an assertion kind"), Ok)?;
        if !ASSERT_KINDS.contains(&kw.text.as_str()) {
            return kw.err(format!("unknown assertion kind '{}'", kw.text));
        }
        let start = kw.col - rest.col + kw.text.chars().count();
        let args = rest.sub(start, rest.text.chars().count()).trimmed();
        let (check, txt) = self.check(&kw.text, &args)?;
        let canonical = format!("assert {}{}{}", if negated { "not " } else { "" }, kw.text, if txt.is_empty() { txt } else { format!(" {}", txt) });
        self.doc.items.push(Item::Assert(Assertion { line, negated, kind: kw.text.clone(), check, canonical }));
        Ok(())
    }

    /// Splits off trailing `bound N`, `at P...`, `= (...)` style options.
    fn option<'p>(&self, p: &'p Piece, kw: &str) -> (Piece, Option<Piece>) {
        match p.split_word(kw) {
            Some((a, b)) => (a, Some(b)),
            None => (p.clone(), None),
        }
    }

    fn bound(&self, p: &Piece) -> Result<(Piece, Option<u32>)> {
        let (a, b) = self.option(p, "bound");
        Ok((a, b.map(|b| b.number().map(|n| n as u32)).transpose()?))
    }

    fn expect_ideal(&self, ring: &QuotientRing, p: &Piece) -> Result<(Piece, Option<IdealRecord>)> {
        let (a, b) = self.option(p, "=");
        match b {
            Some(b) => Ok((a, Some(ring.ideal(self.poly_list(ring.ambient(), &b)?)?))),
            None => Ok((a, None)),
        }
    }

    fn show_ideal(&self, ring: &QuotientRing, i: &Option<IdealRecord>) -> String {
        match i {
            Some(i) => {
                let gens: Vec<Poly> = i.generators().iter().filter(|g| !ring.is_zero(g)).cloned().collect();
                format!(" = ({})", show_list(ring, &gens))
            }
            None => String::new(),
        }
    }

    fn divisor_ring(&self, p: &Piece, kinds: &[&str]) -> Result<(String, QuotientRing)> {
        let (n, _) = self.resolve(p, kinds)?;
        let (_, r) = self.doc.ring_of(&n)?;
        Ok((n, r.clone()))
    }

    fn check(&self, kind: &str, args: &Piece) -> Result<(Check, String)> {
        let opt_bound = |b: Option<u32>| b.map(|b| format!(" bound {}", b)).unwrap_or_default();
        let at_list = |ps: &[String]| if ps.is_empty() { String::new() } else { format!(" at {}", ps.join(" ")) };
        Ok(match kind {
            "member" => {
                let (e, ip) = args.split_word("in").map_or_else(|| args.err("expected '<expr> in IDEAL'"), Ok)?;
                let (iname, ring) = self.divisor_ring(&ip, &["ideal", "prime"])?;
                let f = self.poly(ring.ambient(), &e)?;
                let t = format!("{} in {}", ring.show(&f), iname);
                (Check::Member { ideal: iname, f }, t)
            }
            "nzd" => {
                let (e, rp) = args.split_word("in").map_or_else(|| args.err("expected '<expr> in RING'"), Ok)?;
                let (rname, ring) = self.ring(&rp)?;
                let f = self.poly(ring.ambient(), &e)?;
                let t = format!("{} in {}", ring.show(&f), rname);
                (Check::Nzd { ring: rname, f }, t)
            }
            "reflexive" => {
                let m = self.resolve(args, &["module"])?.0;
                (Check::Reflexive { module: m.clone() }, m)
            }
            "free-rank-one" | "gorenstein" => {
                let (a, pp) = args.split_word("at").map_or_else(|| args.err("expected 'at PRIME'"), Ok)?;
                let prime = self.resolve(&pp, &["prime"])?.0;
                if kind == "gorenstein" {
                    let ring = self.ring(&a)?.0;
                    let t = format!("{} at {}", ring, prime);
                    (Check::Gorenstein { ring, prime }, t)
                } else {
                    let module = self.resolve(&a, &["module"])?.0;
                    let t = format!("{} at {}", module, prime);
                    (Check::FreeRankOne { module, prime }, t)
                }
            }
            "gr" | "sr" => {
                let (a, pp) = args.split_word("at").map_or_else(|| args.err("expected 'at PRIME...'"), Ok)?;
                let w = a.words();
                if w.len() != 2 {
                    return a.err("expected 'SUBJECT r'");
                }
                let subject = self.resolve(&w[0], &["ring", "module"])?.0;
                let r = w[1].number()? as usize;
                let primes = self.primes(&pp.words())?;
                let t = format!("{} {} at {}", subject, r, primes.join(" "));
                (Check::Condition { serre: kind == "sr", subject, r, primes }, t)
            }
            "embedded" => {
                let subject = self.resolve(args, &["ring", "module"])?.0;
                (Check::Embedded { subject: subject.clone() }, subject)
            }
            "etale" | "local-formulas" => {
                let (a, pp) = self.option(args, "at");
                let etale = self.etale_name(&a)?;
                let primes = match pp {
                    Some(pp) => self.primes(&pp.words())?,
                    None => Vec::new(),
                };
                if kind == "local-formulas" && primes.is_empty() {
                    return args.err("expected 'at PRIME...'");
                }
                let t = format!("{}{}", etale, at_list(&primes));
                if kind == "etale" {
                    (Check::Etale { etale, primes }, t)
                } else {
                    (Check::LocalFormulas { etale, primes }, t)
                }
            }
            "nzd-transport" => {
                let (e, mp) = args.split_word("along").map_or_else(|| args.err("expected '<expr> along MAP'"), Ok)?;
                let (map, src) = match self.resolve(&mp, &["map"])? {
                    (n, Entity::Map { source, .. }) => (n, source.clone()),
                    _ => unreachable!(),
                };
                let ring = self.doc.ring(&src)?;
                let f = self.poly(ring.ambient(), &e)?;
                let t = format!("{} along {}", ring.show(&f), map);
                (Check::NzdTransport { map, f }, t)
            }
            "image" => {
                let (a, bound) = self.bound(args)?;
                let (e, mp) = a.split_word("under").map_or_else(|| a.err("expected '<expr> under MAP'"), Ok)?;
                let map = self.resolve(&mp, &["map"])?.0;
                let ring = self.doc.ring_of(&map)?.1;
                let f = self.poly(ring.ambient(), &e)?;
                let t = format!("{} under {}{}", ring.show(&f), map, opt_bound(bound));
                (Check::Image { map, f, bound }, t)
            }
            "saturation" => {
                let (a, extra_p) = self.option(args, "extra");
                let (a, bound) = self.bound(&a)?;
                let (mp, pp) = a.split_word("at").map_or_else(|| a.err("expected 'MAP at PRIME'"), Ok)?;
                let map = self.resolve(&mp, &["map"])?.0;
                let prime = self.resolve(&pp, &["prime"])?.0;
                let ring = self.doc.ring_of(&map)?.1;
                let extra = match extra_p {
                    Some(e) => self.poly_list(ring.ambient(), &e)?,
                    None => Vec::new(),
                };
                let ex = if extra.is_empty() { String::new() } else { format!(" extra ({})", show_list(ring, &extra)) };
                let t = format!("{} at {}{}{}", map, prime, opt_bound(bound), ex);
                (Check::Saturation { map, prime, bound, extra }, t)
            }
            "reflexive-pullback" | "hom-pullback" => {
                let (a, pp) = self.option(args, "at");
                let (mp, ep) = a.split_word("along").map_or_else(|| a.err("expected 'MODULE along ETALE'"), Ok)?;
                let module = self.resolve(&mp, &["module"])?.0;
                let etale = self.etale_name(&ep)?;
                let primes = match pp {
                    Some(pp) => self.primes(&pp.words())?,
                    None => Vec::new(),
                };
                let t = format!("{} along {}{}", module, etale, at_list(&primes));
                if kind == "reflexive-pullback" {
                    (Check::ReflexivePullback { module, etale, primes }, t)
                } else {
                    (Check::HomPullback { module, etale, primes }, t)
                }
            }
            "divisor" => {
                let d = self.resolve(args, &["divisor"])?.0;
                (Check::Divisor { divisor: d.clone() }, d)
            }
            "effective" | "subscheme" | "substack" => {
                let kinds: &[&str] = if kind == "substack" { &["stackdivisor"] } else { &["divisor"] };
                let first = args.words().first().cloned().map_or_else(|| args.err("expected a divisor"), Ok)?;
                let (_, ring) = self.divisor_ring(&first, kinds)?;
                let (a, expect) = self.expect_ideal(&ring, args)?;
                let (a, bound) = self.bound(&a)?;
                let divisor = self.resolve(&a, kinds)?.0;
                let t = format!("{}{}{}", divisor, opt_bound(bound), self.show_ideal(&ring, &expect));
                let c = match kind {
                    "effective" => Check::Effective { divisor, bound, expect },
                    "subscheme" => Check::Subscheme { divisor, bound, expect },
                    _ => Check::Substack { divisor, bound, expect },
                };
                (c, t)
            }
            "section" | "stack-section" => {
                let kinds: &[&str] = if kind == "section" { &["divisor"] } else { &["stackdivisor"] };
                let first = args.words().first().cloned().map_or_else(|| args.err("expected a divisor"), Ok)?;
                let (divisor, ring) = self.divisor_ring(&first, kinds)?;
                let (a, expect) = self.expect_ideal(&ring, args)?;
                let n = first.text.chars().count();
                let sp = a.sub(n, a.text.chars().count()).trimmed();
                let s = self.poly_list(ring.ambient(), &sp)?;
                let t = format!("{} ({}){}", divisor, show_list(&ring, &s), self.show_ideal(&ring, &expect));
                if kind == "section" {
                    (Check::Section { divisor, s, expect }, t)
                } else {
                    (Check::StackSection { divisor, s, expect }, t)
                }
            }
            "equivalent" => {
                let (a, pp) = self.option(args, "at");
                let (a, bound) = self.bound(&a)?;
                let w = a.words();
                if w.len() != 2 {
                    return a.err("expected 'D1 D2'");
                }
                let first = self.resolve(&w[0], &["divisor"])?.0;
                let second = self.resolve(&w[1], &["divisor"])?.0;
                let primes = match pp {
                    Some(pp) => self.primes(&pp.words())?,
                    None => Vec::new(),
                };
                let t = format!("{} {}{}{}", first, second, opt_bound(bound), at_list(&primes));
                (Check::Equivalent { first, second, bound, primes }, t)
            }
            "cocycle" | "stack-divisor" => {
                let e = self.resolve(args, &["equivariant"])?.0;
                let c = if kind == "cocycle" { Check::Cocycle { equivariant: e.clone() } } else { Check::StackDivisor { equivariant: e.clone() } };
                (c, e)
            }
            "invariants" => {
                let first = args.words().first().cloned().map_or_else(|| args.err("expected an equivariant module"), Ok)?;
                let (ename, ring) = self.divisor_ring(&first, &["equivariant"])?;
                let (a, ex) = self.option(args, "=");
                let (a, bound) = self.bound(&a)?;
                let equivariant = self.resolve(&a, &["equivariant"])?.0;
                let expect = match ex {
                    Some(e) => Some(self.poly_list(ring.ambient(), &e)?),
                    None => None,
                };
                let et = expect.as_ref().map(|e| format!(" = ({})", show_list(&ring, e))).unwrap_or_default();
                let t = format!("{}{}{}", ename, opt_bound(bound), et);
                (Check::Invariants { equivariant, bound, expect }, t)
            }
            "descent" => {
                let (a, mp) = args.split_word("by").map_or_else(|| args.err("expected '... by [[matrix]]'"), Ok)?;
                let (mods, map_p) = a.split_word("along").map_or_else(|| a.err("expected 'M1 -> M2 along MAP'"), Ok)?;
                let (fp, tp) = mods.split_word("->").map_or_else(|| mods.err("expected 'M1 -> M2'"), Ok)?;
                let from = self.resolve(&fp, &["module"])?.0;
                let to = self.resolve(&tp, &["module"])?.0;
                let map = self.resolve(&map_p, &["map"])?.0;
                let ring = self.doc.ring_of(&to)?.1.clone();
                let (ncols, rows) = self.matrix(&ring, &mp)?;
                let matrix = Matrix::from_rows(ncols, rows);
                let t = format!("{} -> {} along {} by {}", from, to, map, show_matrix(&ring, &matrix));
                (Check::Descent { from, to, map, matrix }, t)
            }
            _ => unreachable!("kinds are filtered"),
        })
    }

    /// An etale declaration, or a map with exactly one etale declaration.
    fn etale_name(&self, p: &Piece) -> Result<String> {
        match self.resolve(p, &["etale", "map"])? {
            (n, Entity::Etale { .. }) => Ok(n),
            (m, _) => {
                let found: Vec<&String> = self
                    .doc
                    .entities
                    .iter()
                    .filter_map(|(n, e)| match e {
                        Entity::Etale { map, .. } if *map == m => Some(n),
                        _ => None,
                    })
                    .collect();
                match found.as_slice() {
                    [n] => Ok((*n).clone()),
                    [] => p.err(format!("map '{}' has no etale presentation", m)),
                    _ => p.err(format!("map '{}' has several etale presentations; name one", m)),
                }
            }
        }
    }
}

pub fn parse_document(text: &str, options: &ParseOptions) -> Result<Document> {
    let mut b = Builder {
        doc: Document { source: text.to_string(), options: options.clone(), items: Vec::new(), entities: BTreeMap::new() },
    };
    for (i, raw) in text.lines().enumerate() {
        b.line(i + 1, raw)?;
    }
    Ok(b.doc)
}
