use crate::error::{Error, Result};
use crate::io::format_context;
use crate::model::{CpNet, Outcome, ValueId, Verdict};

/// A single-variable value change.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Flip {
    pub var: usize,
    pub from: ValueId,
    pub to: ValueId,
    /// Parent values of `var` when the flip happens.
    pub context: Vec<ValueId>,
}

impl Flip {
    pub fn reversed(&self) -> Flip {
        Flip {
            var: self.var,
            from: self.to,
            to: self.from,
            context: self.context.clone(),
        }
    }

    /// `X: v -> v' @ P=p,Q=q` (`@ -` for a root).
    pub fn describe(&self, net: &CpNet) -> String {
        format!(
            "{}: {} -> {} @ {}",
            net.variable(self.var).name,
            net.value_name(self.var, self.from),
            net.value_name(self.var, self.to),
            format_context(net, self.var, &self.context)
        )
    }
}

/// A start outcome and the flips applied to it in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipSequence {
    pub start: Outcome,
    pub flips: Vec<Flip>,
}

impl FlipSequence {
    pub fn len(&self) -> usize {
        self.flips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flips.is_empty()
    }

    /// Every outcome along the sequence, `start` first.
    pub fn outcomes(&self) -> Vec<Outcome> {
        let mut cur = self.start.clone();
        let mut out = vec![cur.clone()];
        for f in &self.flips {
            cur = cur.with(f.var, f.to);
            out.push(cur.clone());
        }
        out
    }

    pub fn end(&self) -> Outcome {
        self.flips
            .iter()
            .fold(self.start.clone(), |o, f| o.with(f.var, f.to))
    }

    /// The same path walked backwards, starting from [`Self::end`].
    pub fn reversed(&self) -> FlipSequence {
        FlipSequence {
            start: self.end(),
            flips: self.flips.iter().rev().map(Flip::reversed).collect(),
        }
    }

    /// Replays the sequence and checks every step is an improving flip
    /// (or an indifferent one when `allow_equal`).
    pub fn validate(&self, net: &CpNet, allow_equal: bool) -> Result<()> {
        net.check_outcome(&self.start)?;
        let mut cur = self.start.clone();
        for (i, f) in self.flips.iter().enumerate() {
            let bad = |why: &str| Error::Precondition(format!("flip {}: {why}", i + 1));
            if f.var >= net.len() {
                return Err(bad("unknown variable"));
            }
            if cur.get(f.var) != f.from {
                return Err(bad("`from` does not match the current value"));
            }
            let ctx = cur.project(net.parents(f.var));
            if ctx != f.context {
                return Err(bad("recorded context does not match"));
            }
            if f.to as usize >= net.domain_size(f.var) {
                return Err(bad("value out of domain"));
            }
            match net.compare_unchecked(f.var, &ctx, f.to, f.from) {
                Verdict::Better => {}
                Verdict::Equal if allow_equal && f.to != f.from => {}
                _ => return Err(bad("not an improving flip")),
            }
            cur = cur.with(f.var, f.to);
        }
        Ok(())
    }
}

/// Single flips that improve `o`, in variable order then value order. On
/// nets with indifference, flips between equally preferred values are
/// included too.
pub fn improving_flips(net: &CpNet, o: &Outcome) -> Vec<Flip> {
    flips_from(net, o, Verdict::Better, net.has_indifference())
}

pub(crate) fn flips_from(net: &CpNet, o: &Outcome, want: Verdict, allow_equal: bool) -> Vec<Flip> {
    let mut out = Vec::new();
    for var in 0..net.len() {
        let context = o.project(net.parents(var));
        let cur = o.get(var);
        for v in 0..net.domain_size(var) as ValueId {
            if v == cur {
                continue;
            }
            let verdict = net.compare_unchecked(var, &context, v, cur);
            if verdict == want || (allow_equal && verdict == Verdict::Equal) {
                out.push(Flip {
                    var,
                    from: cur,
                    to: v,
                    context: context.clone(),
                });
            }
        }
    }
    out
}
