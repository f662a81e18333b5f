//! The line-oriented `.cpnet` text format and the `X=v,Y=w` assignment syntax.
//!
//! ```text
//! # My Dinner I
//! var S : S_f S_v
//! var W : W_w W_r
//!
//! cpt S
//! - : S_f > S_v
//!
//! cpt W (S)
//! S_f : W_w > W_r
//! S_v : W_r > W_w
//! ```
//!
//! `>` is strict preference and `=` indifference; a chain `a > b = c`
//! contributes the statements `a > b` and `b = c`. Repeating a context on
//! consecutive lines merges the statements into one row, which is how
//! partial rows are written.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::{
    CpNet, LocalRelation, Outcome, PartialAssignment, Statement, StatementKind, ValueId, Variable,
};

/// Source location of one declaration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone)]
pub struct NetDocument {
    pub source: String,
    pub net: CpNet,
    /// Per variable: where it was declared and where its `cpt` block starts.
    pub var_spans: Vec<Span>,
    pub cpt_spans: Vec<Option<Span>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok<'a> {
    Ident(&'a str),
    Colon,
    Comma,
    LParen,
    RParen,
    Gt,
    Eq,
}

#[derive(Debug, Clone)]
struct Token<'a> {
    tok: Tok<'a>,
    column: usize,
}

fn is_punct(c: char) -> bool {
    matches!(c, ':' | ',' | '(' | ')' | '>' | '=' | '#')
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut chars = line.char_indices().peekable();
    let col = |byte: usize| line[..byte].chars().count() + 1;
    while let Some(&(i, c)) = chars.peek() {
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let tok = match c {
            ':' => Some(Tok::Colon),
            ',' => Some(Tok::Comma),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '>' => Some(Tok::Gt),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(tok) = tok {
            chars.next();
            out.push(Token { tok, column: col(i) });
            continue;
        }
        let start = i;
        let mut end = i;
        while let Some(&(j, c)) = chars.peek() {
            if c.is_whitespace() || is_punct(c) {
                break;
            }
            end = j + c.len_utf8();
            chars.next();
        }
        out.push(Token {
            tok: Tok::Ident(&line[start..end]),
            column: col(start),
        });
    }
    out
}

struct LineParser<'a> {
    line: usize,
    toks: Vec<Token<'a>>,
    pos: usize,
    eol_column: usize,
}

impl<'a> LineParser<'a> {
    fn err(&self, column: usize, message: impl Into<String>) -> Error {
        Error::Syntax {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn column(&self) -> usize {
        self.toks
            .get(self.pos)
            .map_or(self.eol_column, |t| t.column)
    }

    fn peek(&self) -> Option<&Tok<'a>> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn next(&mut self) -> Option<Token<'a>> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn ident(&mut self, what: &str) -> Result<(&'a str, usize)> {
        let col = self.column();
        match self.next() {
            Some(Token {
                tok: Tok::Ident(s), ..
            }) => Ok((s, col)),
            Some(t) => Err(self.err(t.column, format!("expected {what}, found {:?}", t.tok))),
            None => Err(self.err(col, format!("expected {what}, found end of line"))),
        }
    }

    fn expect(&mut self, tok: Tok<'static>, what: &str) -> Result<()> {
        let col = self.column();
        match self.next() {
            Some(t) if t.tok == tok => Ok(()),
            Some(t) => Err(self.err(t.column, format!("expected {what}, found {:?}", t.tok))),
            None => Err(self.err(col, format!("expected {what}, found end of line"))),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn expect_end(&self) -> Result<()> {
        if let Some(t) = self.toks.get(self.pos) {
            return Err(self.err(t.column, format!("unexpected {:?}", t.tok)));
        }
        Ok(())
    }
}

struct CptState {
    var: usize,
    seen_contexts: BTreeSet<Vec<ValueId>>,
    last_context: Option<Vec<ValueId>>,
    pending: Vec<Statement>,
}

pub fn parse_net(text: &str) -> Result<CpNet> {
    parse_document(text).map(|d| d.net)
}

pub fn parse_document(text: &str) -> Result<NetDocument> {
    let mut net = CpNet::new();
    let mut var_spans = Vec::new();
    let mut cpt_spans: Vec<Option<Span>> = Vec::new();
    let mut current: Option<CptState> = None;

    let text_body = text.strip_prefix('\u{feff}').unwrap_or(text);
    for (lineno, raw) in text_body.split('\n').enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let toks = tokenize(line);
        if toks.is_empty() {
            continue;
        }
        let mut p = LineParser {
            line: lineno + 1,
            toks,
            pos: 0,
            eol_column: line.chars().count() + 1,
        };
        let is_decl = |kw: &str, p: &LineParser| {
            matches!(p.toks.first().map(|t| &t.tok), Some(Tok::Ident(s)) if *s == kw)
                && matches!(p.toks.get(1).map(|t| &t.tok), Some(Tok::Ident(_)))
        };
        if is_decl("var", &p) {
            let span = Span {
                line: p.line,
                column: p.column(),
            };
            p.next();
            let (name, col) = p.ident("variable name")?;
            if name == "-" {
                return Err(p.err(col, "`-` is reserved"));
            }
            p.expect(Tok::Colon, "`:`")?;
            let mut values: Vec<&str> = Vec::new();
            while !p.at_end() {
                let (v, vcol) = p.ident("value name")?;
                if v == "-" {
                    return Err(p.err(vcol, "`-` is reserved"));
                }
                if values.contains(&v) {
                    return Err(p.err(vcol, format!("duplicate value `{v}` in `{name}`")));
                }
                values.push(v);
            }
            if values.is_empty() {
                return Err(p.err(p.eol_column, format!("variable `{name}` declares no values")));
            }
            if net.index_of(name).is_some() {
                return Err(p.err(col, format!("duplicate variable `{name}`")));
            }
            net.add_variable(Variable::new(name, values.iter().copied()))?;
            var_spans.push(span);
            cpt_spans.push(None);
        } else if is_decl("cpt", &p) {
            flush(&mut net, &mut current);
            let span = Span {
                line: p.line,
                column: p.column(),
            };
            p.next();
            let (name, col) = p.ident("variable name")?;
            let var = net
                .index_of(name)
                .ok_or_else(|| p.err(col, format!("undeclared variable `{name}`")))?;
            if cpt_spans[var].is_some() {
                return Err(p.err(col, format!("second cpt block for `{name}`")));
            }
            let mut parents = Vec::new();
            if p.peek() == Some(&Tok::LParen) {
                p.next();
                loop {
                    let (pname, pcol) = p.ident("parent name")?;
                    let pv = net
                        .index_of(pname)
                        .ok_or_else(|| p.err(pcol, format!("undeclared variable `{pname}`")))?;
                    if parents.contains(&pv) {
                        return Err(p.err(pcol, format!("parent `{pname}` listed twice")));
                    }
                    parents.push(pv);
                    match p.next() {
                        Some(Token { tok: Tok::Comma, .. }) => continue,
                        Some(Token {
                            tok: Tok::RParen, ..
                        }) => break,
                        Some(t) => {
                            return Err(p.err(t.column, "expected `,` or `)`"));
                        }
                        None => return Err(p.err(p.eol_column, "expected `)`")),
                    }
                }
            }
            p.expect_end()?;
            net.set_parents(var, parents);
            cpt_spans[var] = Some(span);
            current = Some(CptState {
                var,
                seen_contexts: BTreeSet::new(),
                last_context: None,
                pending: Vec::new(),
            });
        } else {
            let state = current
                .as_mut()
                .ok_or_else(|| p.err(p.column(), "row outside a cpt block"))?;
            let var = state.var;
            let parents = net.parents(var).to_vec();
            let ctx_col = p.column();
            let mut context = Vec::with_capacity(parents.len());
            if parents.is_empty() {
                let (tok, col) = p.ident("`-`")?;
                if tok != "-" {
                    return Err(p.err(col, "parentless cpt rows start with `-`"));
                }
            } else {
                for (k, &parent) in parents.iter().enumerate() {
                    if k > 0 {
                        p.expect(Tok::Comma, "`,`")?;
                    }
                    let (vname, vcol) = p.ident("parent value")?;
                    let v = net.variable(parent).value_index(vname).ok_or_else(|| {
                        p.err(
                            vcol,
                            format!(
                                "unknown value `{vname}` for parent `{}`",
                                net.variable(parent).name
                            ),
                        )
                    })?;
                    context.push(v);
                }
            }
            p.expect(Tok::Colon, "`:`")?;
            let mut statements = Vec::new();
            let (first, fcol) = p.ident("value")?;
            let mut prev = lookup_value(&net, var, first).ok_or_else(|| {
                p.err(
                    fcol,
                    format!("unknown value `{first}` for `{}`", net.variable(var).name),
                )
            })?;
            while !p.at_end() {
                let op_col = p.column();
                let kind = match p.next().map(|t| t.tok) {
                    Some(Tok::Gt) => StatementKind::Strict,
                    Some(Tok::Eq) => StatementKind::Indifferent,
                    _ => return Err(p.err(op_col, "expected `>` or `=`")),
                };
                let (name, col) = p.ident("value")?;
                let v = lookup_value(&net, var, name).ok_or_else(|| {
                    p.err(
                        col,
                        format!("unknown value `{name}` for `{}`", net.variable(var).name),
                    )
                })?;
                statements.push(match kind {
                    StatementKind::Strict => Statement::strict(prev, v),
                    StatementKind::Indifferent => Statement::indifferent(prev, v),
                });
                prev = v;
            }
            if state.last_context.as_ref() == Some(&context) {
                state.pending.extend(statements);
            } else {
                if state.seen_contexts.contains(&context) {
                    return Err(p.err(ctx_col, "duplicate row context"));
                }
                let (var_idx, prev_ctx, prev_stmts) = (
                    state.var,
                    state.last_context.take(),
                    std::mem::take(&mut state.pending),
                );
                if let Some(ctx) = prev_ctx {
                    let d = net.domain_size(var_idx);
                    net.set_row(var_idx, ctx, LocalRelation::new(d, prev_stmts));
                }
                let state = current.as_mut().expect("cpt state");
                state.seen_contexts.insert(context.clone());
                state.last_context = Some(context);
                state.pending = statements;
            }
        }
    }
    flush(&mut net, &mut current);
    Ok(NetDocument {
        source: text.to_string(),
        net,
        var_spans,
        cpt_spans,
    })
}

fn lookup_value(net: &CpNet, var: usize, name: &str) -> Option<ValueId> {
    net.variable(var).value_index(name)
}

fn flush(net: &mut CpNet, current: &mut Option<CptState>) {
    if let Some(mut state) = current.take() {
        if let Some(ctx) = state.last_context.take() {
            let d = net.domain_size(state.var);
            net.set_row(state.var, ctx, LocalRelation::new(d, state.pending));
        }
    }
}

/// Canonical text: variables in declaration order, then one `cpt` block per
/// variable with rows in lexicographic context order.
pub fn serialize_net(net: &CpNet) -> String {
    let mut out = String::new();
    for var in net.variables() {
        out.push_str(&format!("var {} : {}\n", var.name, var.values.join(" ")));
    }
    for (i, var) in net.variables().iter().enumerate() {
        out.push('\n');
        let parents = net.parents(i);
        if parents.is_empty() {
            out.push_str(&format!("cpt {}\n", var.name));
        } else {
            let names: Vec<&str> = parents
                .iter()
                .map(|&p| net.variable(p).name.as_str())
                .collect();
            out.push_str(&format!("cpt {} ({})\n", var.name, names.join(", ")));
        }
        for (ctx, rel) in &net.cpt(i).rows {
            let ctx_text = if parents.is_empty() {
                "-".to_string()
            } else {
                parents
                    .iter()
                    .zip(ctx)
                    .map(|(&p, &v)| net.value_name(p, v))
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            for chain in chains(rel) {
                let mut line = format!("{ctx_text} : {}", net.value_name(i, chain.0));
                for (kind, v) in chain.1 {
                    let op = match kind {
                        StatementKind::Strict => '>',
                        StatementKind::Indifferent => '=',
                    };
                    line.push_str(&format!(" {op} {}", net.value_name(i, v)));
                }
                out.push_str(&line);
                out.push('\n');
            }
        }
    }
    out
}

type Chain = (ValueId, Vec<(StatementKind, ValueId)>);

/// Splits a statement set into chain lines that reparse to the same set.
fn chains(rel: &LocalRelation) -> Vec<Chain> {
    let mut unused: Vec<Statement> = rel.statements().iter().copied().collect();
    let mut out = Vec::new();
    while !unused.is_empty() {
        let touches = |t: &Statement, v: ValueId| match t.kind {
            StatementKind::Strict => t.left == v,
            StatementKind::Indifferent => t.left == v || t.right == v,
        };
        let mut heads: Vec<ValueId> = (0..rel.domain_size() as ValueId)
            .filter(|&v| unused.iter().any(|t| touches(t, v)))
            .collect();
        // values nothing strictly beats make the most readable chain heads
        if let Some(k) = heads.iter().position(|&v| {
            !unused
                .iter()
                .any(|t| t.kind == StatementKind::Strict && t.right == v)
        }) {
            heads.swap(0, k);
        }
        let head = heads[0];
        let mut steps = Vec::new();
        let mut tail = head;
        loop {
            let next = unused.iter().position(|t| match t.kind {
                StatementKind::Strict => t.left == tail,
                StatementKind::Indifferent => t.left == tail || t.right == tail,
            });
            let Some(k) = next else { break };
            let t = unused.remove(k);
            let to = if t.kind == StatementKind::Strict || t.left == tail {
                t.right
            } else {
                t.left
            };
            steps.push((t.kind, to));
            tail = to;
        }
        out.push((head, steps));
    }
    if out.is_empty() {
        // a lone value keeps an empty row distinct from a missing one
        out.push((0, Vec::new()));
    }
    out
}

/// Parses `X=v,Y=w`. With `require_total`, every variable must be assigned.
pub fn parse_assignment(
    text: &str,
    net: &CpNet,
    require_total: bool,
) -> Result<PartialAssignment> {
    let mut z = PartialAssignment::empty(net.len());
    let trimmed = text.trim();
    if !trimmed.is_empty() {
        for part in trimmed.split(',') {
            let (name, value) = part.split_once('=').ok_or_else(|| Error::Syntax {
                line: 1,
                column: 1,
                message: format!("expected `X=v`, found `{}`", part.trim()),
            })?;
            let var = net.var_index(name.trim())?;
            let v = net.value_index(var, value.trim())?;
            if z.get(var).is_some() {
                return Err(Error::DuplicateAssignment(name.trim().to_string()));
            }
            z.set(var, v);
        }
    }
    if require_total {
        if let Some(missing) = (0..net.len()).find(|&i| z.get(i).is_none()) {
            return Err(Error::MissingVariable(net.variable(missing).name.clone()));
        }
    }
    Ok(z)
}

pub fn parse_outcome(text: &str, net: &CpNet) -> Result<Outcome> {
    Ok(parse_assignment(text, net, true)?
        .to_outcome()
        .expect("total assignment"))
}

pub fn format_outcome(net: &CpNet, o: &Outcome) -> String {
    o.values()
        .iter()
        .enumerate()
        .map(|(i, &v)| format!("{}={}", net.variable(i).name, net.value_name(i, v)))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn format_partial(net: &CpNet, z: &PartialAssignment) -> String {
    z.0.iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|v| format!("{}={}", net.variable(i).name, net.value_name(i, v))))
        .collect::<Vec<_>>()
        .join(",")
}

/// `P=p,Q=q` for a parent context of `var`; `-` when `var` has no parents.
pub fn format_context(net: &CpNet, var: usize, context: &[ValueId]) -> String {
    if context.is_empty() {
        return "-".to_string();
    }
    net.parents(var)
        .iter()
        .zip(context)
        .map(|(&p, &v)| format!("{}={}", net.variable(p).name, net.value_name(p, v)))
        .collect::<Vec<_>>()
        .join(",")
}
