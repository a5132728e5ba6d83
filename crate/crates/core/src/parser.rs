//! Parser for the textual rule DSL.
//!
//! Grammar, one statement per line (`#` starts a comment, `.` terminates):
//!
//! ```text
//! fact  <id>: <prop> : <sign> [weight <w>] [axiom] .
//! rule  <id>: <prop> { & <prop> } -> <prop> : <sign> [weight <w>] [axiom] .
//! ```
//!
//! `<sign>` is one of `++ + - --`; `<w>` is a decimal in `(0, 1]`.

use crate::kb::{ItemId, KbError, KbItem, KnowledgeBase, Proposition, SignTag};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(f64),
    Colon,
    Amp,
    Arrow,
    Dot,
    Sign(SignTag),
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Number(n) => format!("`{n}`"),
        Tok::Colon => "`:`".into(),
        Tok::Amp => "`&`".into(),
        Tok::Arrow => "`->`".into(),
        Tok::Dot => "`.`".into(),
        Tok::Sign(s) => format!("`{}`", s.token()),
    }
}

fn lex(source: &str) -> Result<Vec<Spanned>, KbError> {
    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = source.chars().peekable();

    macro_rules! err {
        ($l:expr, $c:expr, $($arg:tt)*) => {
            return Err(KbError::Syntax { line: $l, col: $c, msg: format!($($arg)*) })
        };
    }

    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            ':' => {
                chars.next();
                col += 1;
                toks.push(Spanned { tok: Tok::Colon, line: tl, col: tc });
            }
            '&' => {
                chars.next();
                col += 1;
                toks.push(Spanned { tok: Tok::Amp, line: tl, col: tc });
            }
            '+' => {
                chars.next();
                col += 1;
                let sign = if chars.peek() == Some(&'+') {
                    chars.next();
                    col += 1;
                    SignTag::Confirm
                } else {
                    SignTag::Support
                };
                toks.push(Spanned { tok: Tok::Sign(sign), line: tl, col: tc });
            }
            '-' => {
                chars.next();
                col += 1;
                match chars.peek() {
                    Some(&'>') => {
                        chars.next();
                        col += 1;
                        toks.push(Spanned { tok: Tok::Arrow, line: tl, col: tc });
                    }
                    Some(&'-') => {
                        chars.next();
                        col += 1;
                        toks.push(Spanned {
                            tok: Tok::Sign(SignTag::Exclude),
                            line: tl,
                            col: tc,
                        });
                    }
                    _ => toks.push(Spanned {
                        tok: Tok::Sign(SignTag::Oppose),
                        line: tl,
                        col: tc,
                    }),
                }
            }
            '.' => {
                chars.next();
                col += 1;
                toks.push(Spanned { tok: Tok::Dot, line: tl, col: tc });
            }
            c if c.is_ascii_digit() => {
                let mut text = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        text.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                // A `.` belongs to the number only when digits follow it;
                // otherwise it is the statement terminator.
                let mut lookahead = chars.clone();
                if lookahead.next() == Some('.')
                    && lookahead.peek().is_some_and(|d| d.is_ascii_digit())
                {
                    text.push('.');
                    chars.next();
                    col += 1;
                    while let Some(&d) = chars.peek() {
                        if d.is_ascii_digit() {
                            text.push(d);
                            chars.next();
                            col += 1;
                        } else {
                            break;
                        }
                    }
                }
                let value: f64 = match text.parse() {
                    Ok(v) => v,
                    Err(_) => err!(tl, tc, "malformed number `{text}`"),
                };
                toks.push(Spanned { tok: Tok::Number(value), line: tl, col: tc });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut text = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        text.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                toks.push(Spanned { tok: Tok::Ident(text), line: tl, col: tc });
            }
            other => err!(tl, tc, "unexpected character `{other}`"),
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end_line: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, expected: &str) -> KbError {
        match self.peek() {
            Some(t) => KbError::Syntax {
                line: t.line,
                col: t.col,
                msg: format!("expected {expected}, found {}", describe(&t.tok)),
            },
            None => KbError::Syntax {
                line: self.end_line,
                col: 1,
                msg: format!("expected {expected}, found end of input"),
            },
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<String, KbError> {
        match self.peek() {
            Some(Spanned { tok: Tok::Ident(_), .. }) => {
                if let Some(Spanned { tok: Tok::Ident(s), .. }) = self.next() {
                    Ok(s)
                } else {
                    unreachable!()
                }
            }
            _ => Err(self.error_here(what)),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), KbError> {
        match self.peek() {
            Some(t) if t.tok == tok => {
                self.next();
                Ok(())
            }
            _ => Err(self.error_here(what)),
        }
    }

    fn located_name<T>(
        &self,
        at: (usize, usize),
        result: Result<T, KbError>,
    ) -> Result<T, KbError> {
        result.map_err(|e| match e {
            KbError::InvalidName(name) => KbError::Syntax {
                line: at.0,
                col: at.1,
                msg: format!("invalid identifier `{name}`"),
            },
            other => other,
        })
    }

    fn statement(&mut self) -> Result<KbItem, KbError> {
        let head = self.peek().cloned();
        let kind = match &head {
            Some(Spanned { tok: Tok::Ident(s), .. }) if s == "fact" || s == "rule" => {
                s.clone()
            }
            _ => return Err(self.error_here("`fact` or `rule`")),
        };
        self.next();

        let id_at = self.loc();
        let id_name = self.expect_ident("an item id")?;
        let id = self.located_name(id_at, ItemId::new(&id_name))?;
        self.expect(Tok::Colon, "`:` after the item id")?;

        let mut props = Vec::new();
        let prop_at = self.loc();
        let first = self.expect_ident("a proposition")?;
        props.push(self.located_name(prop_at, Proposition::new(&first))?);

        let consequent;
        if kind == "rule" {
            while matches!(self.peek(), Some(Spanned { tok: Tok::Amp, .. })) {
                self.next();
                let at = self.loc();
                let name = self.expect_ident("a proposition after `&`")?;
                props.push(self.located_name(at, Proposition::new(&name))?);
            }
            self.expect(Tok::Arrow, "`->` before the rule consequent")?;
            let at = self.loc();
            let name = self.expect_ident("the rule consequent")?;
            consequent = self.located_name(at, Proposition::new(&name))?;
        } else {
            consequent = props.pop().unwrap();
        }

        self.expect(Tok::Colon, "`:` before the sign tag")?;
        let sign = match self.peek() {
            Some(Spanned { tok: Tok::Sign(s), .. }) => {
                let s = *s;
                self.next();
                s
            }
            _ => return Err(self.error_here("a sign tag (`++`, `+`, `-` or `--`)")),
        };

        let mut weight = 1.0;
        let mut axiomatic = false;
        if matches!(self.peek(), Some(Spanned { tok: Tok::Ident(s), .. }) if s == "weight")
        {
            self.next();
            weight = match self.peek() {
                Some(Spanned { tok: Tok::Number(n), .. }) => {
                    let n = *n;
                    self.next();
                    n
                }
                _ => return Err(self.error_here("a decimal weight")),
            };
        }
        if matches!(self.peek(), Some(Spanned { tok: Tok::Ident(s), .. }) if s == "axiom")
        {
            self.next();
            axiomatic = true;
        }
        self.expect(Tok::Dot, "`.` ending the statement")?;

        if kind == "fact" {
            KbItem::fact(id, consequent, sign, weight, axiomatic)
        } else {
            KbItem::rule(id, props, consequent, sign, weight, axiomatic)
        }
    }

    fn loc(&self) -> (usize, usize) {
        self.peek()
            .map(|t| (t.line, t.col))
            .unwrap_or((self.end_line, 1))
    }
}

/// Parses DSL source into a validated [`KnowledgeBase`].
pub fn parse_kb(source: &str) -> Result<KnowledgeBase, KbError> {
    let toks = lex(source)?;
    let end_line = source.lines().count().max(1);
    let mut parser = Parser { toks, pos: 0, end_line };
    let mut items = Vec::new();
    while parser.peek().is_some() {
        items.push(parser.statement()?);
    }
    KnowledgeBase::new(items)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::ItemKind;

    #[test]
    fn minimal_fact() {
        let kb = parse_kb("fact ames_positive_f: ames_positive : + .").unwrap();
        assert_eq!(kb.items().len(), 1);
        let item = &kb.items()[0];
        assert_eq!(item.kind(), ItemKind::Fact);
        assert_eq!(item.sign(), SignTag::Support);
        assert_eq!(item.weight(), 1.0);
        assert!(!item.axiomatic());
    }

    #[test]
    fn rule_with_weight() {
        let kb = parse_kb(
            "rule r1: aromatic_amine & bioavailable -> carcinogenic : + weight 0.6 .",
        )
        .unwrap();
        let item = &kb.items()[0];
        assert_eq!(item.kind(), ItemKind::Rule);
        assert_eq!(item.antecedents().len(), 2);
        assert_eq!(item.weight(), 0.6);
    }

    #[test]
    fn self_loop_is_rejected() {
        let err = parse_kb("rule r1: p -> p : + .").unwrap_err();
        assert!(matches!(err, KbError::SelfLoop(_, _)));
    }

    #[test]
    fn comments_and_crlf_are_accepted() {
        let kb = parse_kb("# header\r\nfact f1: p : ++ .\r\n# trailing\n").unwrap();
        assert_eq!(kb.items().len(), 1);
        assert_eq!(kb.items()[0].sign(), SignTag::Confirm);
    }

    #[test]
    fn axiom_marker() {
        let kb = parse_kb("fact f1: p : ++ axiom .").unwrap();
        assert!(kb.items()[0].axiomatic());
    }

    #[test]
    fn axiom_with_non_unit_weight_is_rejected() {
        let err = parse_kb("fact f1: p : + weight 0.5 axiom .").unwrap_err();
        assert!(matches!(err, KbError::AxiomWeight(_)));
    }

    #[test]
    fn weight_out_of_range_is_rejected() {
        assert!(matches!(
            parse_kb("fact f1: p : + weight 1.5 ."),
            Err(KbError::WeightOutOfRange(_))
        ));
        assert!(matches!(
            parse_kb("fact f1: p : + weight 0 ."),
            Err(KbError::WeightOutOfRange(_))
        ));
    }

    #[test]
    fn duplicate_id_is_rejected() {
        let err = parse_kb("fact f1: p : + .\nfact f1: q : - .").unwrap_err();
        assert!(matches!(err, KbError::DuplicateId(_)));
    }

    #[test]
    fn cyclic_rules_are_rejected() {
        let err = parse_kb(
            "rule r1: a -> b : + .\nrule r2: b -> a : + .\nfact f1: a : + .",
        )
        .unwrap_err();
        assert!(matches!(err, KbError::CyclicRules { .. }));
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_kb("fact f1 p : + .") {
            Err(KbError::Syntax { line, col, .. }) => {
                assert_eq!(line, 1);
                assert!(col > 1);
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn unit_weight_followed_by_terminator() {
        // `weight 1 .` must not swallow the terminator into the number.
        let kb = parse_kb("fact f1: p : + weight 1 .").unwrap();
        assert_eq!(kb.items()[0].weight(), 1.0);
    }

    #[test]
    fn round_trip_is_item_identical() {
        let src = "\
fact f_alert: benzidine_alert : + .
rule r_alert: benzidine_alert & bioavailable -> carcinogenic : + weight 0.7 .
fact f_ax: bioavailable : ++ axiom .
";
        let kb = parse_kb(src).unwrap();
        let reparsed = parse_kb(&kb.to_dsl()).unwrap();
        assert_eq!(kb, reparsed);
    }
}
