use super::{Clause, DslError, OpProgram, PerturbOp, Scope};
use crate::prompt::{normalize_space, validate_content};
use crate::srl::RoleLabel;

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, at: usize, message: impl Into<String>) -> DslError {
        DslError::Parse { offset: self.src[..at.min(self.src.len())].chars().count(), message: message.into() }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn ident(&mut self) -> Result<(usize, &'a str), DslError> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if !(c.is_ascii_uppercase() || c.is_ascii_digit() || c == '_' || c == '-') {
                break;
            }
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error(start, "expected an uppercase name"));
        }
        Ok((start, &self.src[start..self.pos]))
    }

    /// Parenthesized argument with `\(`, `\)` and `\\` escapes; returns
    /// the unescaped text and its start offset.
    fn arg(&mut self) -> Result<Option<(usize, String)>, DslError> {
        self.skip_ws();
        if self.peek() != Some('(') {
            return Ok(None);
        }
        let open = self.pos;
        self.pos += 1;
        let start = self.pos;
        let mut out = String::new();
        loop {
            let Some(c) = self.peek() else {
                return Err(self.error(open, "unclosed '('"));
            };
            self.pos += c.len_utf8();
            match c {
                ')' => break,
                '(' => return Err(self.error(self.pos - 1, "unescaped '(' inside argument")),
                '\\' => {
                    let Some(next) = self.peek() else {
                        return Err(self.error(self.pos - 1, "dangling escape"));
                    };
                    if !matches!(next, '(' | ')' | '\\') {
                        return Err(self.error(self.pos - 1, format!("unknown escape \\{next}")));
                    }
                    self.pos += next.len_utf8();
                    out.push(next);
                }
                c => out.push(c),
            }
        }
        Ok(Some((start, out)))
    }

    fn op(&mut self) -> Result<(usize, PerturbOp), DslError> {
        let (at, name) = self.ident()?;
        let arg = self.arg()?;
        let need = |arg: Option<(usize, String)>, what: &str| -> Result<(usize, String), DslError> {
            arg.ok_or_else(|| self.error(self.pos, format!("{name} takes an argument ({what})")))
        };
        let none = |arg: &Option<(usize, String)>| -> Result<(), DslError> {
            match arg {
                Some((a, _)) => Err(self.error(*a, format!("{name} takes no argument"))),
                None => Ok(()),
            }
        };
        let op = match name {
            "CHANGE_VTENSE" | "CHANGE_VFORM" => {
                let (a, v) = need(arg, "past, present or future")?;
                PerturbOp::ChangeVTense(v.trim().parse().map_err(|e: String| self.error(a, e))?)
            }
            "CHANGE_VVOICE" | "CHANGE_VOICE" => {
                let (a, v) = need(arg, "active or passive")?;
                PerturbOp::ChangeVVoice(v.trim().parse().map_err(|e: String| self.error(a, e))?)
            }
            "CHANGE_VLEMMA" => {
                let (a, v) = need(arg, "a lemma")?;
                let lemma = normalize_space(&v);
                validate_content(&lemma).map_err(|e| self.error(a, e.to_string()))?;
                PerturbOp::ChangeVLemma(lemma)
            }
            "SWAP_CORE" => {
                none(&arg)?;
                PerturbOp::SwapCore
            }
            "CORE" => {
                let (a, v) = need(arg, "SWAP_CORE")?;
                if v.trim() != "SWAP_CORE" {
                    return Err(self.error(a, "CORE only wraps SWAP_CORE"));
                }
                PerturbOp::SwapCore
            }
            "CHANGE_IDX" => {
                let (a, v) = need(arg, "from:to")?;
                let (from, to) = self.range(a, &v)?;
                PerturbOp::ChangeIdx { from, to }
            }
            "MOVE" => match arg {
                None => PerturbOp::Move(None),
                Some((a, v)) => PerturbOp::Move(Some(v.trim().parse().map_err(|_| self.error(a, "expected a position"))?)),
            },
            "CHANGE_CONTENT" | "CONTENT" => {
                let (a, v) = need(arg, "keyword content")?;
                let content = normalize_space(&v);
                if content != "*" {
                    validate_content(&content).map_err(|e| self.error(a, e.to_string()))?;
                }
                PerturbOp::ChangeContent(content)
            }
            "CHANGE_SPEC" | "SPEC" => {
                let (a, v) = need(arg, "complete, partial or sparse")?;
                PerturbOp::ChangeSpec(v.trim().parse().map_err(|e: String| self.error(a, e))?)
            }
            "DELETE" => {
                none(&arg)?;
                PerturbOp::Delete
            }
            "CONTEXT_DELETE_TEXT" => match arg {
                None => PerturbOp::ContextDeleteText(None),
                Some((a, v)) => PerturbOp::ContextDeleteText(Some(self.range(a, &v)?)),
            },
            "CONTEXT" => {
                let (a, v) = need(arg, "DELETE_TEXT")?;
                if v.trim() != "DELETE_TEXT" {
                    return Err(self.error(a, "CONTEXT only wraps DELETE_TEXT"));
                }
                PerturbOp::ContextDeleteText(None)
            }
            other => return Err(self.error(at, format!("unknown operation {other}"))),
        };
        Ok((at, op))
    }

    fn range(&self, at: usize, v: &str) -> Result<(usize, usize), DslError> {
        let (a, b) = v.split_once(':').ok_or_else(|| self.error(at, "expected <int>:<int>"))?;
        let a = a.trim().parse().map_err(|_| self.error(at, "expected <int>:<int>"))?;
        let b = b.trim().parse().map_err(|_| self.error(at, "expected <int>:<int>"))?;
        Ok((a, b))
    }

    fn clause(&mut self) -> Result<Clause, DslError> {
        self.skip_ws();
        let save = self.pos;
        let (at, name) = self.ident()?;
        self.skip_ws();
        let scope = if self.peek() == Some(':') {
            self.pos += 1;
            if name == "VERB" {
                Scope::Global
            } else {
                Scope::Role(name.parse::<RoleLabel>().map_err(|e| self.error(at, e.to_string()))?)
            }
        } else {
            self.pos = save;
            Scope::Global
        };
        let mut ops = Vec::new();
        loop {
            self.skip_ws();
            let (at, op) = self.op()?;
            match (&scope, op.is_role_scoped()) {
                (Scope::Global, true) => return Err(self.error(at, format!("{} needs a ROLE: scope", op.name()))),
                (Scope::Role(r), false) => {
                    return Err(self.error(at, format!("{} cannot be scoped to {r}", op.name())));
                }
                _ => {}
            }
            ops.push(op);
            self.skip_ws();
            if self.peek() == Some(',') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(Clause { scope, ops })
    }
}

/// Parses a program, normalizing aliases (`CONTENT`, `SPEC`,
/// `CHANGE_VFORM`, `CHANGE_VOICE`, `CORE(SWAP_CORE)`, `CONTEXT(DELETE_TEXT)`)
/// and a `VERB:` scope to their canonical forms.
pub fn parse_program(text: &str) -> Result<OpProgram, DslError> {
    let mut p = Parser { src: text, pos: 0 };
    let mut clauses = Vec::new();
    loop {
        clauses.push(p.clause()?);
        p.skip_ws();
        match p.peek() {
            Some(';') | Some('|') => p.pos += 1,
            None => break,
            Some(c) => return Err(p.error(p.pos, format!("unexpected {c:?}"))),
        }
        p.skip_ws();
        if p.peek().is_none() {
            // tolerate a trailing separator
            break;
        }
    }
    let mut deleted: Vec<&RoleLabel> = Vec::new();
    for clause in &clauses {
        if let Scope::Role(r) = &clause.scope {
            for op in &clause.ops {
                if *op == PerturbOp::Delete {
                    if deleted.contains(&r) {
                        return Err(DslError::Parse { offset: 0, message: format!("{r} is deleted more than once") });
                    }
                    deleted.push(r);
                }
            }
        }
    }
    Ok(OpProgram { clauses })
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        if matches!(c, '(' | ')' | '\\') {
            out.push('\\');
        }
        out.push(c);
    }
    out
}

fn render_op(op: &PerturbOp) -> String {
    let name = op.name();
    match op {
        PerturbOp::ChangeVTense(t) => format!("{name}({t})"),
        PerturbOp::ChangeVVoice(v) => format!("{name}({v})"),
        PerturbOp::ChangeVLemma(l) => format!("{name}({})", escape(l)),
        PerturbOp::ChangeIdx { from, to } => format!("{name}({from}:{to})"),
        PerturbOp::Move(Some(n)) => format!("{name}({n})"),
        PerturbOp::ChangeContent(c) => format!("{name}({})", escape(c)),
        PerturbOp::ChangeSpec(s) => format!("{name}({s})"),
        PerturbOp::ContextDeleteText(Some((a, b))) => format!("{name}({a}:{b})"),
        PerturbOp::SwapCore | PerturbOp::Move(None) | PerturbOp::Delete | PerturbOp::ContextDeleteText(None) => name.to_string(),
    }
}

/// Canonical, alias-free rendering: clauses joined by `;`, ops by `,`.
pub fn render_program(program: &OpProgram) -> String {
    program
        .clauses
        .iter()
        .map(|c| {
            let ops: Vec<String> = c.ops.iter().map(render_op).collect();
            match &c.scope {
                Scope::Global => ops.join(","),
                Scope::Role(r) => format!("{r}:{}", ops.join(",")),
            }
        })
        .collect::<Vec<_>>()
        .join(";")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::srl::{Specificity, Tense};

    #[test]
    fn single_role_clause() {
        let p = parse_program("LOCATIVE:CHANGE_SPEC(partial)").unwrap();
        assert_eq!(p, OpProgram::role(RoleLabel::Locative, vec![PerturbOp::ChangeSpec(Specificity::Partial)]));
    }

    #[test]
    fn aliases_and_spacing() {
        let p = parse_program("AGENT:CONTENT(who); MANNER:CONTENT(their own militia),SPEC(partial)").unwrap();
        assert_eq!(render_program(&p), "AGENT:CHANGE_CONTENT(who);MANNER:CHANGE_CONTENT(their own militia),CHANGE_SPEC(partial)");
        assert_eq!(render_program(&parse_program("VERB:CHANGE_VFORM(past)").unwrap()), "CHANGE_VTENSE(past)");
        assert_eq!(render_program(&parse_program("CORE(SWAP_CORE)").unwrap()), "SWAP_CORE");
        assert_eq!(render_program(&parse_program("CONTEXT(DELETE_TEXT)").unwrap()), "CONTEXT_DELETE_TEXT");
        assert_eq!(
            render_program(&parse_program("VERB:CHANGE_VOICE(passive)|AGENT:CHANGE_CONTENT (by the athlete)").unwrap()),
            "CHANGE_VVOICE(passive);AGENT:CHANGE_CONTENT(by the athlete)"
        );
    }

    #[test]
    fn global_index_op() {
        let p = parse_program("CHANGE_IDX(4:0)").unwrap();
        assert_eq!(p, OpProgram::global(vec![PerturbOp::ChangeIdx { from: 4, to: 0 }]));
        assert_eq!(
            parse_program("CHANGE_VTENSE(present)").unwrap(),
            OpProgram::global(vec![PerturbOp::ChangeVTense(Tense::Present)])
        );
    }

    #[test]
    fn escapes_round_trip() {
        let p = OpProgram::role(RoleLabel::Agent, vec![PerturbOp::ChangeContent("a (b) c\\d".into())]);
        let text = render_program(&p);
        assert_eq!(text, "AGENT:CHANGE_CONTENT(a \\(b\\) c\\\\d)");
        assert_eq!(parse_program(&text).unwrap(), p);
    }

    fn err_offset(text: &str) -> usize {
        match parse_program(text) {
            Err(DslError::Parse { offset, .. }) => offset,
            other => panic!("expected parse error for {text:?}, got {other:?}"),
        }
    }

    #[test]
    fn errors() {
        assert_eq!(err_offset(""), 0);
        assert_eq!(err_offset("FROB"), 0);
        assert_eq!(err_offset("AGENT:"), 6);
        assert_eq!(err_offset("AGENT:SWAP_CORE"), 6);
        assert_eq!(err_offset("DELETE"), 0);
        assert_eq!(err_offset("CHANGE_VTENSE(later)"), 14);
        assert_eq!(err_offset("SWAP_CORE(x)"), 10);
        assert_eq!(err_offset("CHANGE_VTENSE"), 13);
        assert_eq!(err_offset("AGENT:CHANGE_CONTENT(a [b])"), 21);
        assert_eq!(err_offset("AGENT:DELETE;AGENT:DELETE"), 0);
        assert_eq!(err_offset("AGENT:DELETE;;"), 13);
        assert_eq!(err_offset("CHANGE_IDX(4)"), 11);
        assert_eq!(err_offset("agent:DELETE"), 0);
    }
}
