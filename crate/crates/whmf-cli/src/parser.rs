//! Prefix expression grammar for form expressions.
//!
//! Expressions are written in function-call style, case-insensitively:
//!
//! ```text
//! expr   := "E2" | "Delta" | "J"
//!         | "Ek" "(" int ")"              weight-k Eisenstein series
//!         | "Ekpz" "(" int "," int ")"    E_k(pz), prime p
//!         | "Ekp" "(" int "," int ")"     (p^{k/2}·E_k(pz) + E_k) / (p^{k/2}+1)
//!         | "Deltapz" "(" int ")"         Δ(pz)
//!         | "const" "(" rational ")"
//!         | "add" "(" expr { "," expr } ")"
//!         | "mul" "(" expr { "," expr } ")"
//!         | "sub" "(" expr "," expr ")"
//!         | "pow" "(" expr "," int ")"
//!         | "scale" "(" rational "," expr ")"
//! rational := int [ "/" int ]
//! ```
//!
//! Whitespace is free.  Errors carry the byte offset of the offending token,
//! e.g. `parse error at byte 4: expected ')'`.

use num_bigint::BigInt;
use num_rational::BigRational;
use whmf::forms::FormExpr;

/// A parse failure with the byte position where it was detected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "parse error at byte {}: {}", self.pos, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Parses a complete form expression; trailing input is an error.
pub fn parse_form(input: &str) -> Result<FormExpr, ParseError> {
    let mut p = Parser { input, pos: 0 };
    let expr = p.expr()?;
    p.skip_ws();
    if p.pos != p.input.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(expr)
}

struct Parser<'a> {
    input: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> ParseError {
        ParseError { pos: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.input[self.pos..].starts_with(|c: char| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.input[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.input[self.pos..].starts_with(|c: char| c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected a name"));
        }
        Ok(self.input[start..self.pos].to_ascii_lowercase())
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.input[self.pos..].starts_with(['-', '+']) {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.input[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return Err(self.error("expected an integer"));
        }
        self.input[start..self.pos]
            .parse::<BigInt>()
            .map_err(|e| self.error(&format!("bad integer: {e}")))
    }

    fn small_uint(&mut self, what: &str) -> Result<u32, ParseError> {
        let n = self.integer()?;
        u32::try_from(&n).map_err(|_| self.error(&format!("{what} out of range")))
    }

    fn rational(&mut self) -> Result<BigRational, ParseError> {
        let numer = self.integer()?;
        if self.peek() == Some('/') {
            self.pos += 1;
            let denom = self.integer()?;
            if denom == BigInt::from(0) {
                return Err(self.error("zero denominator"));
            }
            Ok(BigRational::new(numer, denom))
        } else {
            Ok(BigRational::from_integer(numer))
        }
    }

    fn args<T>(
        &mut self,
        mut item: impl FnMut(&mut Self) -> Result<T, ParseError>,
    ) -> Result<Vec<T>, ParseError> {
        self.expect('(')?;
        let mut out = vec![item(self)?];
        while self.peek() == Some(',') {
            self.pos += 1;
            out.push(item(self)?);
        }
        self.expect(')')?;
        Ok(out)
    }

    fn fixed_args<const N: usize, T>(
        &mut self,
        item: impl FnMut(&mut Self) -> Result<T, ParseError>,
        head: &str,
    ) -> Result<[T; N], ParseError> {
        let args = self.args(item)?;
        let got = args.len();
        args.try_into()
            .map_err(|_| self.error(&format!("{head} takes {N} argument(s), got {got}")))
    }

    fn expr(&mut self) -> Result<FormExpr, ParseError> {
        let head = self.ident()?;
        match head.as_str() {
            "e2" => Ok(FormExpr::E2),
            "delta" => Ok(FormExpr::Delta),
            "j" => Ok(FormExpr::J),
            "ek" => {
                let [k] = self.fixed_args(|p| p.small_uint("weight"), "Ek")?;
                Ok(FormExpr::Ek(k))
            }
            "ekpz" => {
                let [k, p] = self.fixed_args(|p| p.small_uint("parameter"), "Ekpz")?;
                Ok(FormExpr::EkScaled(k, p))
            }
            "ekp" => {
                let [k, p] = self.fixed_args(|p| p.small_uint("parameter"), "Ekp")?;
                Ok(FormExpr::fricke(k, p))
            }
            "deltapz" => {
                let [p] = self.fixed_args(|p| p.small_uint("level"), "Deltapz")?;
                Ok(FormExpr::DeltaScaled(p))
            }
            "const" => {
                let [c] = self.fixed_args(Self::rational, "const")?;
                Ok(FormExpr::Const(c))
            }
            "add" => Ok(FormExpr::Sum(self.args(Self::expr)?)),
            "mul" => Ok(FormExpr::Product(self.args(Self::expr)?)),
            "sub" => {
                let [a, b] = self.fixed_args(Self::expr, "sub")?;
                Ok(FormExpr::sub(a, b))
            }
            "pow" => {
                self.expect('(')?;
                let base = self.expr()?;
                self.expect(',')?;
                let e = self.integer()?;
                self.expect(')')?;
                let e = i64::try_from(&e).map_err(|_| self.error("exponent out of range"))?;
                Ok(FormExpr::Power(Box::new(base), e))
            }
            "scale" => {
                self.expect('(')?;
                let c = self.rational()?;
                self.expect(',')?;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(FormExpr::Scale(c, Box::new(inner)))
            }
            other => Err(self.error(&format!("unknown form '{other}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn num(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn parses_generators_and_combinators() {
        assert_eq!(parse_form("Ek(4)").unwrap(), FormExpr::Ek(4));
        assert_eq!(parse_form("  e2 ").unwrap(), FormExpr::E2);
        assert_eq!(parse_form("Ekpz(6, 2)").unwrap(), FormExpr::EkScaled(6, 2));
        assert_eq!(parse_form("Deltapz(3)").unwrap(), FormExpr::DeltaScaled(3));
        assert_eq!(parse_form("const(-3/2)").unwrap(), FormExpr::Const(-num(3) / num(2)));
        assert_eq!(
            parse_form("mul(pow(Delta,1), sub(J, const(1728)))").unwrap(),
            FormExpr::Product(vec![
                FormExpr::Power(Box::new(FormExpr::Delta), 1),
                FormExpr::sub(FormExpr::J, FormExpr::Const(num(1728))),
            ])
        );
        assert_eq!(
            parse_form("scale(1/691, add(Ek(12), Ek(12)))").unwrap(),
            FormExpr::Scale(
                BigRational::new(1.into(), 691.into()),
                Box::new(FormExpr::Sum(vec![FormExpr::Ek(12), FormExpr::Ek(12)])),
            )
        );
    }

    #[test]
    fn fricke_shorthand_expands_to_the_weighted_average() {
        assert_eq!(parse_form("Ekp(4,2)").unwrap(), FormExpr::fricke(4, 2));
    }

    #[test]
    fn reports_error_positions() {
        let err = parse_form("mul(Delta").unwrap_err();
        assert_eq!(err.pos, 9);
        assert!(err.message.contains("expected"));

        let err = parse_form("frob(3)").unwrap_err();
        assert!(err.message.contains("unknown form 'frob'"));

        let err = parse_form("Ek(4) Ek(6)").unwrap_err();
        assert_eq!(err.message, "unexpected trailing input");
        assert_eq!(err.pos, 6);

        let err = parse_form("sub(J)").unwrap_err();
        assert!(err.message.contains("takes 2 argument(s)"));

        let err = parse_form("const(1/0)").unwrap_err();
        assert!(err.message.contains("zero denominator"));
    }
}
