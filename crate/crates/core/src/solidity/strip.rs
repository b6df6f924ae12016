// Copyright 2026 The codelineage Authors
// SPDX-License-Identifier: Apache-2.0

//! Comment removal and string masking for Solidity text.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stripped {
    pub text: String,
    /// A `/*` comment ran to end of input.
    pub unterminated_comment: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum State {
    Code,
    Str(char),
    StrEscape(char),
    Line,
    Block,
}

/// Removes `//` and `/* */` comments. String literals are copied verbatim and
/// newlines inside block comments are kept, so line numbers do not move.
/// Block comments do not nest. A string left open at end of line is closed
/// there, as Solidity strings cannot span lines.
pub fn strip_comments(src: &str) -> Stripped {
    let mut out = String::with_capacity(src.len());
    let mut state = State::Code;
    let mut chars = src.chars().peekable();
    while let Some(c) = chars.next() {
        state = match state {
            State::Code => match c {
                '/' if chars.peek() == Some(&'/') => {
                    chars.next();
                    State::Line
                }
                '/' if chars.peek() == Some(&'*') => {
                    chars.next();
                    State::Block
                }
                '"' | '\'' => {
                    out.push(c);
                    State::Str(c)
                }
                _ => {
                    out.push(c);
                    State::Code
                }
            },
            State::Str(q) => {
                out.push(c);
                match c {
                    '\\' => State::StrEscape(q),
                    '\n' => State::Code,
                    _ if c == q => State::Code,
                    _ => State::Str(q),
                }
            }
            State::StrEscape(q) => {
                out.push(c);
                if c == '\n' {
                    State::Code
                } else {
                    State::Str(q)
                }
            }
            State::Line => {
                if c == '\n' {
                    out.push(c);
                    State::Code
                } else {
                    State::Line
                }
            }
            State::Block => {
                if c == '\n' {
                    out.push(c);
                    State::Block
                } else if c == '*' && chars.peek() == Some(&'/') {
                    chars.next();
                    State::Code
                } else {
                    State::Block
                }
            }
        };
    }
    Stripped {
        text: out,
        unterminated_comment: state == State::Block,
    }
}

/// Replaces the contents of string literals with spaces, byte for byte, so
/// offsets into the result are offsets into the input. Expects comment-free
/// text.
pub fn mask_strings(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut quote: Option<char> = None;
    let mut escaped = false;
    for c in text.chars() {
        match quote {
            None => {
                if c == '"' || c == '\'' {
                    quote = Some(c);
                }
                out.push(c);
            }
            Some(q) => {
                if c == '\n' {
                    quote = None;
                    escaped = false;
                    out.push(c);
                } else if escaped {
                    escaped = false;
                    out.extend(std::iter::repeat(' ').take(c.len_utf8()));
                } else if c == '\\' {
                    escaped = true;
                    out.push(' ');
                } else if c == q {
                    quote = None;
                    out.push(c);
                } else {
                    out.extend(std::iter::repeat(' ').take(c.len_utf8()));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn strip(s: &str) -> String {
        strip_comments(s).text
    }

    #[test]
    fn line_comment() {
        assert_eq!(strip("uint a; // note"), "uint a; ");
        assert_eq!(strip("a // x\nb"), "a \nb");
    }

    #[test]
    fn strings_are_kept() {
        let src = "string u = \"url('/*x*/')\"; // gone";
        assert_eq!(strip(src), "string u = \"url('/*x*/')\"; ");
        assert_eq!(strip("s = 'a//b';"), "s = 'a//b';");
        assert_eq!(strip(r#"s = "q\"//"; // c"#), r#"s = "q\"//"; "#);
    }

    #[test]
    fn block_comments_do_not_nest() {
        assert_eq!(strip("x /* a /* b */ y */"), "x  y */");
        assert_eq!(strip("a/*1\n2\n3*/b"), "a\n\nb");
    }

    #[test]
    fn unterminated_block() {
        let s = strip_comments("uint a;\n/* open\nforever");
        assert!(s.unterminated_comment);
        assert_eq!(s.text, "uint a;\n\n");
        assert!(!strip_comments("a /* b */").unterminated_comment);
    }

    #[test]
    fn masking_keeps_offsets() {
        let src = "import \"zeppelin/é.sol\"; contract A {}";
        let m = mask_strings(src);
        assert_eq!(m.len(), src.len());
        assert!(!m.contains("zeppelin"));
        assert_eq!(&m[m.find("contract").unwrap()..], "contract A {}");
    }

    proptest! {
        #[test]
        fn stripping_is_idempotent(s in "[a-z/*'\"\\\\\n ]{0,40}") {
            let once = strip(&s);
            prop_assert_eq!(strip(&once), once.clone());
        }

        #[test]
        fn line_count_is_preserved(s in "[a-z/*'\"\n ]{0,40}") {
            let once = strip(&s);
            prop_assert_eq!(once.matches('\n').count(), s.matches('\n').count());
        }

        #[test]
        fn masking_preserves_length(s in "\\PC{0,30}") {
            prop_assert_eq!(mask_strings(&s).len(), s.len());
        }
    }
}
