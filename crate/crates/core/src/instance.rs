//! Text format for presentations.
//!
//! ```text
//! field = 3
//! vertex 1
//! vertex 2
//! arrow a: 1 -> 2
//! relation b*a - 2*c*a     # b*a means a first
//! option max_nilpotency = 8
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use crate::algebra::{Presentation, Relation, DEFAULT_MAX_NILPOTENCY};
use crate::biserial::DEFAULT_FULLER_BOUND;
use crate::bisected::DEFAULT_SEARCH_BUDGET;
use crate::criteria::{DecideOptions, DEFAULT_OBSTRUCTION_BUDGET};
use crate::linalg::Field;
use crate::quiver::{Arrow, Path, Quiver};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}: {message}")]
    Semantic { line: usize, message: String },
    #[error("missing `field = <p>` line")]
    MissingField,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceOptions {
    pub max_nilpotency: usize,
    pub fuller_bound: usize,
    pub search_budget: u64,
    pub obstruction_budget: usize,
}

impl Default for InstanceOptions {
    fn default() -> Self {
        InstanceOptions {
            max_nilpotency: DEFAULT_MAX_NILPOTENCY,
            fuller_bound: DEFAULT_FULLER_BOUND,
            search_budget: DEFAULT_SEARCH_BUDGET,
            obstruction_budget: DEFAULT_OBSTRUCTION_BUDGET,
        }
    }
}

impl InstanceOptions {
    pub fn decide_options(&self) -> DecideOptions {
        DecideOptions {
            fuller_bound: self.fuller_bound,
            search_budget: self.search_budget,
            obstruction_budget: self.obstruction_budget,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub presentation: Presentation,
    pub options: InstanceOptions,
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

struct Cursor<'a> {
    line: usize,
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(line: usize, text: &'a str, pos: usize) -> Self {
        Cursor { line, text, pos }
    }

    fn err(&self, message: impl Into<String>) -> InstanceError {
        InstanceError::Syntax {
            line: self.line,
            column: self.text[..self.pos].chars().count() + 1,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.text.len()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), InstanceError> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{}`", s)))
        }
    }

    fn ident(&mut self) -> Result<&'a str, InstanceError> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(is_ident_char) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an identifier"));
        }
        Ok(&self.text[start..self.pos])
    }

    fn end(&mut self) -> Result<(), InstanceError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err("unexpected trailing input"))
        }
    }
}

fn number<T: std::str::FromStr>(cur: &mut Cursor) -> Result<T, InstanceError> {
    let word = cur.ident()?;
    word.parse()
        .map_err(|_| cur.err(format!("`{}` is not a valid number", word)))
}

/// Parses the text format. Relations are checked against the quiver and
/// normalized over the field.
pub fn parse_instance(text: &str) -> Result<Instance, InstanceError> {
    let mut field = None;
    let mut vertices: Vec<String> = Vec::new();
    let mut arrows: Vec<(usize, String, String, String)> = Vec::new();
    let mut relations: Vec<(usize, &str, usize)> = Vec::new();
    let mut options = InstanceOptions::default();

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("");
        let mut cur = Cursor::new(line, body, 0);
        if cur.at_end() {
            continue;
        }
        let keyword = cur.ident()?;
        match keyword {
            "field" => {
                cur.expect("=")?;
                let p: u32 = number(&mut cur)?;
                cur.end()?;
                let f = Field::new(p).map_err(|e| InstanceError::Semantic {
                    line,
                    message: e.to_string(),
                })?;
                if field.replace(f).is_some() {
                    return Err(InstanceError::Semantic {
                        line,
                        message: "field declared twice".into(),
                    });
                }
            }
            "vertex" => {
                while !cur.at_end() {
                    let v = cur.ident()?.to_string();
                    if vertices.contains(&v) {
                        return Err(InstanceError::Semantic {
                            line,
                            message: format!("duplicate vertex `{}`", v),
                        });
                    }
                    vertices.push(v);
                    cur.eat(",");
                }
            }
            "arrow" => {
                let name = cur.ident()?.to_string();
                cur.expect(":")?;
                let s = cur.ident()?.to_string();
                cur.expect("->")?;
                let t = cur.ident()?.to_string();
                cur.end()?;
                if arrows.iter().any(|a| a.1 == name) {
                    return Err(InstanceError::Semantic {
                        line,
                        message: format!("duplicate arrow `{}`", name),
                    });
                }
                arrows.push((line, name, s, t));
            }
            "relation" => {
                cur.skip_ws();
                relations.push((line, body, cur.pos));
            }
            "option" => {
                let key = cur.ident()?;
                cur.expect("=")?;
                match key {
                    "max_nilpotency" => options.max_nilpotency = number(&mut cur)?,
                    "fuller_bound" => options.fuller_bound = number(&mut cur)?,
                    "search_budget" => options.search_budget = number(&mut cur)?,
                    "obstruction_budget" => options.obstruction_budget = number(&mut cur)?,
                    other => {
                        return Err(InstanceError::Semantic {
                            line,
                            message: format!("unknown option `{}`", other),
                        })
                    }
                }
                cur.end()?;
            }
            other => {
                return Err(InstanceError::Syntax {
                    line,
                    column: 1 + body.len() - body.trim_start().len(),
                    message: format!("unknown keyword `{}`", other),
                })
            }
        }
    }

    let field = field.ok_or(InstanceError::MissingField)?;
    let mut arrow_list = Vec::new();
    for (line, name, s, t) in &arrows {
        let find = |v: &str| {
            vertices.iter().position(|w| w == v).ok_or_else(|| InstanceError::Semantic {
                line: *line,
                message: format!("unknown vertex `{}`", v),
            })
        };
        arrow_list.push(Arrow {
            name: name.clone(),
            source: find(s)?,
            target: find(t)?,
        });
    }
    let quiver = Quiver::new(vertices, arrow_list).map_err(|e| InstanceError::Semantic {
        line: 0,
        message: e.to_string(),
    })?;

    let mut rels = Vec::new();
    for &(line, body, pos) in &relations {
        let mut cur = Cursor::new(line, body, pos);
        rels.push(parse_expression(&mut cur, &quiver, field)?);
    }
    let presentation = Presentation::new(quiver, field, rels.into_iter().map(|(_, r)| r).collect())
        .map_err(|e| InstanceError::Semantic {
            line: 0,
            message: e.to_string(),
        })?;
    Ok(Instance {
        presentation,
        options,
    })
}

fn parse_expression(cur: &mut Cursor, q: &Quiver, f: Field) -> Result<(usize, Relation), InstanceError> {
    let line = cur.line;
    let sem = |message: String| InstanceError::Semantic { line, message };
    let mut terms: Vec<(u32, Path)> = Vec::new();
    let mut first = true;
    loop {
        let negative = if cur.eat("-") {
            true
        } else if cur.eat("+") || first {
            false
        } else {
            return Err(cur.err("expected `+` or `-`"));
        };
        first = false;
        cur.skip_ws();
        let mut coeff = 1i64;
        if cur.peek().is_some_and(|c| c.is_ascii_digit()) {
            let save = cur.pos;
            let word = cur.ident()?;
            match word.parse::<i64>() {
                Ok(c) => {
                    coeff = c;
                    cur.expect("*")?;
                }
                Err(_) => cur.pos = save,
            }
        }
        let start = cur.pos;
        let mut names = vec![cur.ident()?];
        while cur.eat("*") {
            names.push(cur.ident()?);
        }
        let mut ids = Vec::new();
        for n in &names {
            ids.push(
                q.arrow_index(n)
                    .ok_or_else(|| sem(format!("unknown arrow `{}`", n)))?,
            );
        }
        let path = Path::from_written(q, &ids)
            .ok_or_else(|| sem(format!("`{}` is not a path", cur.text[start..cur.pos].trim())))?;
        if path.len() < 2 {
            return Err(sem(format!("relation term `{}` has length below two", path.display(q))));
        }
        if let Some((_, p0)) = terms.first() {
            if p0.source() != path.source() || p0.target() != path.target() {
                return Err(sem(format!(
                    "`{}` and `{}` have different endpoints",
                    p0.display(q),
                    path.display(q)
                )));
            }
        }
        let c = f.from_i64(if negative { -coeff } else { coeff });
        terms.push((c, path));
        if cur.at_end() {
            break;
        }
    }
    Ok((line, Relation::new(f, terms)))
}

/// Prints an instance in the text format; options equal to their defaults
/// are omitted.
pub fn print_instance(inst: &Instance) -> String {
    let pres = &inst.presentation;
    let q = pres.quiver();
    let mut s = String::new();
    let _ = writeln!(s, "field = {}", pres.field().modulus());
    for v in q.vertices() {
        let _ = writeln!(s, "vertex {}", v);
    }
    for a in q.arrows() {
        let _ = writeln!(
            s,
            "arrow {}: {} -> {}",
            a.name,
            q.vertex_name(a.source),
            q.vertex_name(a.target)
        );
    }
    for r in pres.relations() {
        let _ = writeln!(s, "relation {}", r.display(q, pres.field()));
    }
    let d = InstanceOptions::default();
    let o = &inst.options;
    if o.max_nilpotency != d.max_nilpotency {
        let _ = writeln!(s, "option max_nilpotency = {}", o.max_nilpotency);
    }
    if o.fuller_bound != d.fuller_bound {
        let _ = writeln!(s, "option fuller_bound = {}", o.fuller_bound);
    }
    if o.search_budget != d.search_budget {
        let _ = writeln!(s, "option search_budget = {}", o.search_budget);
    }
    if o.obstruction_budget != d.obstruction_budget {
        let _ = writeln!(s, "option obstruction_budget = {}", o.obstruction_budget);
    }
    s
}
