//! Expression grammar for GWA products: sums, differences, and products of
//! X, Y, h, and integer scalars, with parentheses and unary minus.

use num_bigint::BigInt;

use algred::{gwa_multiply, GwaData, GwaElement, Rational};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Plus,
    Minus,
    Star,
    Open,
    Close,
    X,
    Y,
    H,
    Int(BigInt),
}

fn tokenize(src: &str) -> Result<Vec<Token>, CliError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some((pos, c)) = chars.next() {
        match c {
            c if c.is_whitespace() => {}
            '+' => out.push(Token::Plus),
            '-' => out.push(Token::Minus),
            '*' => out.push(Token::Star),
            '(' => out.push(Token::Open),
            ')' => out.push(Token::Close),
            'X' => out.push(Token::X),
            'Y' => out.push(Token::Y),
            'h' => out.push(Token::H),
            '0'..='9' => {
                let mut digits = String::from(c);
                while let Some((_, d)) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(*d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token::Int(digits.parse().expect("digit runs parse")));
            }
            other => {
                return Err(CliError::Input(format!(
                    "unexpected {other:?} at position {pos} in expression {src:?}"
                )));
            }
        }
    }
    Ok(out)
}

pub fn parse(src: &str, data: &GwaData<Rational>) -> Result<GwaElement<Rational>, CliError> {
    let tokens = tokenize(src)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        data,
        src,
    };
    let value = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.fail("trailing input"));
    }
    Ok(value)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    data: &'a GwaData<Rational>,
    src: &'a str,
}

impl Parser<'_> {
    fn fail(&self, what: &str) -> CliError {
        CliError::Input(format!(
            "{what} at token {} in expression {:?}",
            self.pos, self.src
        ))
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn expr(&mut self) -> Result<GwaElement<Rational>, CliError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<GwaElement<Rational>, CliError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Token::Star) {
            self.pos += 1;
            acc = gwa_multiply(self.data, &acc, &self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<GwaElement<Rational>, CliError> {
        let one = Rational::from_integer(BigInt::from(1));
        let token = self.peek().cloned();
        self.pos += 1;
        match token {
            Some(Token::Minus) => Ok(self.factor()?.neg()),
            Some(Token::X) => Ok(GwaElement::gen_x(&one)),
            Some(Token::Y) => Ok(GwaElement::gen_y(&one)),
            Some(Token::H) => Ok(GwaElement::gen_h(&one)),
            Some(Token::Int(n)) => Ok(GwaElement::constant(Rational::from_integer(n))),
            Some(Token::Open) => {
                let inner = self.expr()?;
                match self.peek() {
                    Some(Token::Close) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(self.fail("expected ')'")),
                }
            }
            Some(_) | None => {
                self.pos -= 1;
                Err(self.fail("expected X, Y, h, an integer, or '('"))
            }
        }
    }
}
