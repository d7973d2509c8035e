//! Channel spec strings.
//!
//! ```text
//! spec    := family ":" args
//! family  := "bsc" | "bec" | "biawgn" | "bilc" | "rayleigh" | "bnsc" | "msc" | "mix"
//! args    := number                          (bsc, bec, biawgn, bilc, rayleigh)
//!          | number "," number               (bnsc: p01,p10)
//!          | number ("," number)+            (msc: p0,...,p{m-1})
//!          | atom (";" atom)*                (mix)
//! atom    := "(" number "," number ")"       (weight, crossover)
//! number  := anything Rust's f64 parser accepts
//! ```
//!
//! Blanks around numbers and separators are ignored. Error positions are byte
//! offsets into the original string.

use super::msc::MscChannel;
use super::BinaryChannel;
use crate::error::{Error, Result};

/// A parsed channel spec.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelSpec {
    Binary(BinaryChannel),
    Msc(MscChannel),
}

fn parse_error<T>(position: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        position,
        message: message.into(),
    })
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_blanks(&mut self) {
        while self.src[self.pos..].starts_with([' ', '\t']) {
            self.pos += 1;
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_blanks();
        self.pos == self.src.len()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_blanks();
        if self.src[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            parse_error(self.pos, format!("expected '{c}'"))
        }
    }

    fn number(&mut self) -> Result<(usize, f64)> {
        self.skip_blanks();
        let start = self.pos;
        let len = self.src[start..]
            .find([',', ';', '(', ')', ' ', '\t'])
            .unwrap_or(self.src.len() - start);
        let token = &self.src[start..start + len];
        if token.is_empty() {
            return parse_error(start, "expected a number");
        }
        match token.parse::<f64>() {
            Ok(v) if v.is_finite() => {
                self.pos = start + len;
                Ok((start, v))
            }
            _ => parse_error(start, format!("invalid number '{token}'")),
        }
    }

    fn number_list(&mut self) -> Result<Vec<(usize, f64)>> {
        let mut out = vec![self.number()?];
        while self.eat(',') {
            out.push(self.number()?);
        }
        Ok(out)
    }
}

/// Re-labels a domain error from a constructor as a parse error at `position`.
fn at<T>(position: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Domain(message) => Error::Parse { position, message },
        other => other,
    })
}

pub fn parse_channel(src: &str) -> Result<ChannelSpec> {
    let Some(colon) = src.find(':') else {
        return parse_error(src.len(), "expected 'family:args'");
    };
    let family = src[..colon].trim();
    let mut cur = Cursor {
        src,
        pos: colon + 1,
    };
    let args_start = colon + 1;

    let spec = match family {
        "bsc" | "bec" | "biawgn" | "bilc" | "rayleigh" => {
            let (pos, v) = cur.number()?;
            let ch = match family {
                "bsc" => BinaryChannel::bsc(v),
                "bec" => BinaryChannel::bec(v),
                "biawgn" => BinaryChannel::bi_awgn(v),
                "bilc" => BinaryChannel::bi_laplace(v),
                _ => BinaryChannel::bi_rayleigh(v),
            };
            ChannelSpec::Binary(at(pos, ch)?)
        }
        "bnsc" => {
            let (pos, p01) = cur.number()?;
            cur.expect(',')?;
            let (_, p10) = cur.number()?;
            ChannelSpec::Binary(at(pos, BinaryChannel::bnsc(p01, p10))?)
        }
        "msc" => {
            let values = cur.number_list()?;
            let p = values.iter().map(|(_, v)| *v).collect();
            ChannelSpec::Msc(at(args_start, MscChannel::new(p))?)
        }
        "mix" => {
            let mut atoms = Vec::new();
            loop {
                cur.expect('(')?;
                let (_, w) = cur.number()?;
                cur.expect(',')?;
                let (_, p) = cur.number()?;
                cur.expect(')')?;
                atoms.push((w, p));
                if !cur.eat(';') {
                    break;
                }
            }
            ChannelSpec::Binary(at(args_start, BinaryChannel::bsc_mixture(atoms))?)
        }
        other => {
            return parse_error(
                src.len() - src.trim_start().len(),
                format!("unknown channel family '{other}'"),
            )
        }
    };
    if !cur.at_end() {
        return parse_error(cur.pos, "unexpected trailing input");
    }
    Ok(spec)
}

/// Parses a spec that must describe a binary-input channel; `msc` specs with
/// `m = 2` are accepted as BSCs.
pub fn parse_binary_channel(src: &str) -> Result<BinaryChannel> {
    match parse_channel(src)? {
        ChannelSpec::Binary(ch) => Ok(ch),
        ChannelSpec::Msc(ch) if ch.m() == 2 => {
            let p = ch.probs()[1];
            if p <= 0.5 {
                BinaryChannel::bsc(p)
            } else {
                BinaryChannel::bsc(1.0 - p)
            }
        }
        ChannelSpec::Msc(ch) => parse_error(
            0,
            format!("expected a binary channel, got msc with m = {}", ch.m()),
        ),
    }
}

/// Parses a spec describing an m-ary symmetric channel; BSC and BEC specs are
/// accepted as their `Z_2` / three-output equivalents where representable.
pub fn parse_msc(src: &str) -> Result<MscChannel> {
    match parse_channel(src)? {
        ChannelSpec::Msc(ch) => Ok(ch),
        ChannelSpec::Binary(BinaryChannel::Bsc { p }) => MscChannel::bsc(p),
        ChannelSpec::Binary(other) => {
            parse_error(0, format!("expected an msc spec, got {}", other.name()))
        }
    }
}
