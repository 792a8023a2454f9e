//! XML document model, parser and canonical serializer.
//!
//! The parser accepts a deliberate subset of XML 1.0: elements, attributes,
//! character data, the five predefined entity references and comments
//! (which are skipped). Processing instructions, DTDs, CDATA sections and
//! namespaces are outside the subset and rejected. Whitespace-only
//! character data between markup is insignificant and discarded; adjacent
//! text fragments are merged, so no two text nodes are ever adjacent.

pub mod problem;
pub mod proof;

/// A node of the document tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum XmlNode {
    Element(Element),
    Text(String),
}

/// An element: name, attributes in input order, children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub name: String,
    pub attrs: Vec<(String, String)>,
    pub children: Vec<XmlNode>,
}

impl Element {
    pub fn new(name: impl Into<String>) -> Self {
        Element { name: name.into(), attrs: Vec::new(), children: Vec::new() }
    }

    pub fn with_children(name: impl Into<String>, children: Vec<XmlNode>) -> Self {
        Element { name: name.into(), attrs: Vec::new(), children }
    }

    pub fn with_text(name: impl Into<String>, text: impl Into<String>) -> Self {
        Element {
            name: name.into(),
            attrs: Vec::new(),
            children: vec![XmlNode::Text(text.into())],
        }
    }

    /// Child elements, in order.
    pub fn child_elements(&self) -> impl Iterator<Item = &Element> {
        self.children.iter().filter_map(|c| match c {
            XmlNode::Element(e) => Some(e),
            XmlNode::Text(_) => None,
        })
    }
}

/// A parse error with its source position.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("XML parse error at line {line}, column {col}: {message}")]
pub struct XmlError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

/// XML whitespace: space, tab, carriage return, line feed. Other Unicode
/// whitespace is ordinary character data.
fn is_xml_ws(c: char) -> bool {
    matches!(c, ' ' | '\t' | '\r' | '\n')
}

struct Parser<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Self {
        Parser { chars: input.chars().peekable(), line: 1, col: 1 }
    }

    fn error(&self, message: impl Into<String>) -> XmlError {
        XmlError { line: self.line, col: self.col, message: message.into() }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn expect(&mut self, expected: char) -> Result<(), XmlError> {
        match self.bump() {
            Some(c) if c == expected => Ok(()),
            Some(c) => Err(self.error(format!("expected '{}', found '{}'", expected, c))),
            None => Err(self.error(format!("expected '{}', found end of input", expected))),
        }
    }

    fn eat(&mut self, expected: char) -> bool {
        if self.peek() == Some(expected) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn skip_whitespace(&mut self) {
        while matches!(self.peek(), Some(c) if is_xml_ws(c)) {
            self.bump();
        }
    }

    fn parse_name(&mut self) -> Result<String, XmlError> {
        let mut name = String::new();
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                name.push(c);
                self.bump();
            }
            Some(c) => return Err(self.error(format!("invalid name start character '{}'", c))),
            None => return Err(self.error("expected a name, found end of input")),
        }
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.') {
                name.push(c);
                self.bump();
            } else {
                break;
            }
        }
        Ok(name)
    }

    fn parse_entity(&mut self) -> Result<char, XmlError> {
        // '&' already consumed
        let mut entity = String::new();
        loop {
            match self.bump() {
                Some(';') => break,
                Some(c) if entity.len() < 8 => entity.push(c),
                Some(_) => return Err(self.error("unterminated entity reference")),
                None => return Err(self.error("unterminated entity reference")),
            }
        }
        match entity.as_str() {
            "lt" => Ok('<'),
            "gt" => Ok('>'),
            "amp" => Ok('&'),
            "quot" => Ok('"'),
            "apos" => Ok('\''),
            other => Err(self.error(format!("unknown entity reference '&{};'", other))),
        }
    }

    /// Skips a comment; the leading "<!" has been consumed.
    fn skip_comment(&mut self) -> Result<(), XmlError> {
        self.expect('-')?;
        self.expect('-')?;
        let mut dashes = 0;
        loop {
            match self.bump() {
                Some('-') => dashes += 1,
                Some('>') if dashes >= 2 => return Ok(()),
                Some(_) => dashes = 0,
                None => return Err(self.error("unterminated comment")),
            }
        }
    }

    /// Skips whitespace and comments outside the root element.
    fn skip_misc(&mut self) -> Result<(), XmlError> {
        loop {
            self.skip_whitespace();
            if self.peek() != Some('<') {
                return Ok(());
            }
            // only consume if this is a comment
            let mut lookahead = self.chars.clone();
            lookahead.next();
            if lookahead.peek() == Some(&'!') {
                self.bump(); // <
                self.bump(); // !
                self.skip_comment()?;
            } else {
                return Ok(());
            }
        }
    }

    fn parse_attr_value(&mut self) -> Result<String, XmlError> {
        let quote = match self.bump() {
            Some(c @ ('"' | '\'')) => c,
            Some(c) => return Err(self.error(format!("expected quoted attribute value, found '{}'", c))),
            None => return Err(self.error("expected quoted attribute value, found end of input")),
        };
        let mut value = String::new();
        loop {
            match self.bump() {
                Some(c) if c == quote => return Ok(value),
                Some('&') => value.push(self.parse_entity()?),
                Some('<') => return Err(self.error("'<' is not allowed in attribute values")),
                Some(c) => value.push(c),
                None => return Err(self.error("unterminated attribute value")),
            }
        }
    }

    /// Parses an element; the leading '<' has been consumed.
    fn parse_element(&mut self) -> Result<Element, XmlError> {
        let name = self.parse_name()?;
        let mut attrs: Vec<(String, String)> = Vec::new();
        loop {
            let had_space = matches!(self.peek(), Some(c) if is_xml_ws(c));
            self.skip_whitespace();
            match self.peek() {
                Some('/') => {
                    self.bump();
                    self.expect('>')?;
                    return Ok(Element { name, attrs, children: Vec::new() });
                }
                Some('>') => {
                    self.bump();
                    let children = self.parse_children(&name)?;
                    return Ok(Element { name, attrs, children });
                }
                Some(_) => {
                    if !had_space {
                        return Err(self.error("expected whitespace before attribute"));
                    }
                    let attr_name = self.parse_name()?;
                    self.skip_whitespace();
                    self.expect('=')?;
                    self.skip_whitespace();
                    let value = self.parse_attr_value()?;
                    if attrs.iter().any(|(k, _)| k == &attr_name) {
                        return Err(self.error(format!("duplicate attribute '{}'", attr_name)));
                    }
                    attrs.push((attr_name, value));
                }
                None => return Err(self.error("unterminated start tag")),
            }
        }
    }

    fn parse_children(&mut self, open_name: &str) -> Result<Vec<XmlNode>, XmlError> {
        let mut children = Vec::new();
        let mut text = String::new();
        loop {
            match self.peek() {
                Some('<') => {
                    self.bump();
                    match self.peek() {
                        Some('/') => {
                            self.bump();
                            let close = self.parse_name()?;
                            self.skip_whitespace();
                            self.expect('>')?;
                            if close != open_name {
                                return Err(self.error(format!(
                                    "mismatched closing tag: expected </{}>, found </{}>",
                                    open_name, close
                                )));
                            }
                            flush_text(&mut text, &mut children);
                            return Ok(children);
                        }
                        Some('!') => {
                            self.bump();
                            if self.peek() == Some('-') {
                                // comments merge the surrounding text
                                self.skip_comment()?;
                            } else {
                                return Err(self.error(
                                    "DTD and CDATA sections are not supported",
                                ));
                            }
                        }
                        Some('?') => {
                            return Err(self.error("processing instructions are not supported"))
                        }
                        _ => {
                            flush_text(&mut text, &mut children);
                            let child = self.parse_element()?;
                            children.push(XmlNode::Element(child));
                        }
                    }
                }
                Some('&') => {
                    self.bump();
                    text.push(self.parse_entity()?);
                }
                Some(c) => {
                    text.push(c);
                    self.bump();
                }
                None => {
                    return Err(self.error(format!("unexpected end of input inside <{}>", open_name)))
                }
            }
        }
    }
}

fn flush_text(text: &mut String, children: &mut Vec<XmlNode>) {
    if !text.is_empty() && !text.chars().all(is_xml_ws) {
        // merge with a preceding text node (possible around comments)
        if let Some(XmlNode::Text(prev)) = children.last_mut() {
            prev.push_str(text);
        } else {
            children.push(XmlNode::Text(std::mem::take(text)));
        }
    }
    text.clear();
}

/// Parses a document into its root element.
pub fn parse_xml(input: &str) -> Result<Element, XmlError> {
    let mut parser = Parser::new(input);
    parser.skip_misc()?;
    if !parser.eat('<') {
        return Err(parser.error("expected root element"));
    }
    if parser.peek() == Some('?') {
        return Err(parser.error("processing instructions are not supported"));
    }
    let root = parser.parse_element()?;
    parser.skip_misc()?;
    if let Some(c) = parser.peek() {
        return Err(parser.error(format!("unexpected content '{}' after root element", c)));
    }
    Ok(root)
}

fn escape_text(value: &str, out: &mut String) {
    for c in value.chars() {
        match c {
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '&' => out.push_str("&amp;"),
            other => out.push(other),
        }
    }
}

fn escape_attr(value: &str, out: &mut String) {
    for c in value.chars() {
        match c {
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '&' => out.push_str("&amp;"),
            '"' => out.push_str("&quot;"),
            other => out.push(other),
        }
    }
}

fn render_element(elem: &Element, depth: usize, out: &mut String) {
    let indent = "  ".repeat(depth);
    out.push_str(&indent);
    out.push('<');
    out.push_str(&elem.name);
    for (name, value) in &elem.attrs {
        out.push(' ');
        out.push_str(name);
        out.push_str("=\"");
        escape_attr(value, out);
        out.push('"');
    }
    if elem.children.is_empty() {
        out.push_str("/>");
        return;
    }
    let only_text = elem.children.iter().all(|c| matches!(c, XmlNode::Text(_)));
    out.push('>');
    if only_text {
        for child in &elem.children {
            if let XmlNode::Text(text) = child {
                escape_text(text, out);
            }
        }
    } else {
        for child in &elem.children {
            out.push('\n');
            match child {
                XmlNode::Element(e) => render_element(e, depth + 1, out),
                XmlNode::Text(text) => {
                    out.push_str(&"  ".repeat(depth + 1));
                    escape_text(text, out);
                }
            }
        }
        out.push('\n');
        out.push_str(&indent);
    }
    out.push_str("</");
    out.push_str(&elem.name);
    out.push('>');
}

/// Renders an element tree in the canonical layout: two-space indentation,
/// self-closing empty elements, double-quoted attributes.
pub fn render(root: &Element) -> String {
    let mut out = String::new();
    render_element(root, 0, &mut out);
    out.push('\n');
    out
}

/// Lexes a document into the token stream used for whitespace-insensitive
/// comparison: tag delimiters, names, attribute pieces and
/// whitespace-separated character-data words. Comments vanish. Returns
/// `None` for input that cannot be tokenized (unterminated markup).
fn ws_tokens(input: &str) -> Option<Vec<String>> {
    let chars: Vec<char> = input.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if is_xml_ws(c) {
            i += 1;
            continue;
        }
        if c == '<' {
            if chars[i..].starts_with(&['<', '!', '-', '-']) {
                let mut j = i + 4;
                loop {
                    if j + 3 > chars.len() {
                        return None;
                    }
                    if chars[j] == '-' && chars[j + 1] == '-' && chars[j + 2] == '>' {
                        i = j + 3;
                        break;
                    }
                    j += 1;
                }
                continue;
            }
            // tag
            if i + 1 < chars.len() && chars[i + 1] == '/' {
                tokens.push("</".to_string());
                i += 2;
            } else {
                tokens.push("<".to_string());
                i += 1;
            }
            loop {
                if i >= chars.len() {
                    return None;
                }
                let c = chars[i];
                if is_xml_ws(c) {
                    i += 1;
                } else if c == '>' {
                    tokens.push(">".to_string());
                    i += 1;
                    break;
                } else if c == '/' && i + 1 < chars.len() && chars[i + 1] == '>' {
                    tokens.push("/>".to_string());
                    i += 2;
                    break;
                } else if c == '=' {
                    tokens.push("=".to_string());
                    i += 1;
                } else if c == '"' || c == '\'' {
                    let quote = c;
                    let mut literal = String::new();
                    literal.push(quote);
                    i += 1;
                    loop {
                        if i >= chars.len() {
                            return None;
                        }
                        let d = chars[i];
                        literal.push(d);
                        i += 1;
                        if d == quote {
                            break;
                        }
                    }
                    tokens.push(literal);
                } else {
                    let mut word = String::new();
                    while i < chars.len() {
                        let d = chars[i];
                        if is_xml_ws(d)
                            || matches!(d, '>' | '=' | '"' | '\'')
                            || (d == '/' && i + 1 < chars.len() && chars[i + 1] == '>')
                        {
                            break;
                        }
                        word.push(d);
                        i += 1;
                    }
                    if word.is_empty() {
                        return None;
                    }
                    tokens.push(word);
                }
            }
        } else {
            let mut word = String::new();
            while i < chars.len() {
                let d = chars[i];
                if is_xml_ws(d) || d == '<' {
                    break;
                }
                word.push(d);
                i += 1;
            }
            tokens.push(word);
        }
    }
    Some(tokens)
}

/// Compares two documents modulo whitespace: maximal whitespace runs
/// outside attribute values act only as token separators, and
/// whitespace-only character data vanishes. Character data that differs by
/// more than whitespace (including entity spelling) compares unequal.
pub fn equal_modulo_whitespace(a: &str, b: &str) -> bool {
    match (ws_tokens(a), ws_tokens(b)) {
        (Some(x), Some(y)) => x == y,
        _ => false,
    }
}
