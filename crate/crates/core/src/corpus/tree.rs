//! Bracketed constituency trees.
//!
//! Trees arrive as labeled bracketings, e.g. `(S (NP (DT the) (NN cat)) (VP
//! (VBD sat)))`. Leaves are bare tokens; every inner node carries a label.
//! Some emitters wrap the whole tree in an extra unlabeled pair of
//! parentheses, `( (S ...) )`; the wrapper is unwrapped on read.

use super::CorpusError;

/// A constituency tree node: either a labeled constituent or a leaf token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstTree {
    Node {
        label: String,
        children: Vec<ConstTree>,
    },
    Leaf {
        token: String,
    },
}

impl ConstTree {
    pub fn node(label: impl Into<String>, children: Vec<ConstTree>) -> Self {
        ConstTree::Node {
            label: label.into(),
            children,
        }
    }

    pub fn leaf(token: impl Into<String>) -> Self {
        ConstTree::Leaf {
            token: token.into(),
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, ConstTree::Leaf { .. })
    }

    pub fn leaf_count(&self) -> usize {
        let mut count = 0;
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            match node {
                ConstTree::Leaf { .. } => count += 1,
                ConstTree::Node { children, .. } => stack.extend(children.iter()),
            }
        }
        count
    }

    /// Leaf tokens in left-to-right order.
    pub fn leaf_tokens(&self) -> Vec<&str> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            match node {
                ConstTree::Leaf { token } => out.push(token.as_str()),
                ConstTree::Node { children, .. } => stack.extend(children.iter().rev()),
            }
        }
        out
    }

    /// Serialize back to bracketed notation.
    pub fn to_bracketed(&self) -> String {
        enum Step<'a> {
            Tree(&'a ConstTree),
            Text(&'static str),
        }
        let mut out = String::new();
        let mut stack = vec![Step::Tree(self)];
        while let Some(step) = stack.pop() {
            match step {
                Step::Text(s) => out.push_str(s),
                Step::Tree(ConstTree::Leaf { token }) => out.push_str(token),
                Step::Tree(ConstTree::Node { label, children }) => {
                    out.push('(');
                    out.push_str(label);
                    stack.push(Step::Text(")"));
                    for child in children.iter().rev() {
                        stack.push(Step::Tree(child));
                        stack.push(Step::Text(" "));
                    }
                }
            }
        }
        out
    }
}

// The derived drop glue recurses per level; deep chains from the parser are
// legal, so unwind iteratively instead.
impl Drop for ConstTree {
    fn drop(&mut self) {
        let mut stack = Vec::new();
        if let ConstTree::Node { children, .. } = self {
            stack.append(children);
        }
        while let Some(mut node) = stack.pop() {
            if let ConstTree::Node { children, .. } = &mut node {
                stack.append(children);
            }
        }
    }
}

struct Frame {
    label: Option<String>,
    children: Vec<ConstTree>,
    open_offset: usize,
}

fn tree_err(offset: usize, msg: impl Into<String>) -> CorpusError {
    CorpusError::Tree {
        offset,
        msg: msg.into(),
    }
}

/// Parse a bracketed tree.
///
/// Errors carry the character offset of the offending position. The parser is
/// iterative, so pathologically deep inputs cannot overflow the stack.
pub fn read_bracketed_tree(input: &str) -> Result<ConstTree, CorpusError> {
    let chars: Vec<(usize, char)> = input.char_indices().collect();
    let mut pos = 0;
    let mut stack: Vec<Frame> = Vec::new();
    let mut root: Option<ConstTree> = None;

    let read_atom = |pos: &mut usize| -> String {
        let start = *pos;
        while *pos < chars.len() {
            let c = chars[*pos].1;
            if c.is_whitespace() || c == '(' || c == ')' {
                break;
            }
            *pos += 1;
        }
        chars[start..*pos].iter().map(|&(_, c)| c).collect()
    };

    while pos < chars.len() {
        let (offset, c) = chars[pos];
        if c.is_whitespace() {
            pos += 1;
            continue;
        }
        if root.is_some() {
            return Err(tree_err(offset, "trailing content after tree"));
        }
        match c {
            '(' => {
                pos += 1;
                while pos < chars.len() && chars[pos].1.is_whitespace() {
                    pos += 1;
                }
                let label = match chars.get(pos) {
                    Some(&(_, '(')) | Some(&(_, ')')) | None => None,
                    Some(_) => Some(read_atom(&mut pos)),
                };
                stack.push(Frame {
                    label,
                    children: Vec::new(),
                    open_offset: offset,
                });
            }
            ')' => {
                pos += 1;
                let frame = stack
                    .pop()
                    .ok_or_else(|| tree_err(offset, "unbalanced ')'"))?;
                let at_top = stack.is_empty();
                let node = close_frame(frame, offset, at_top)?;
                match stack.last_mut() {
                    Some(parent) => parent.children.push(node),
                    None => root = Some(node),
                }
            }
            _ => {
                let token = read_atom(&mut pos);
                match stack.last_mut() {
                    Some(frame) => frame.children.push(ConstTree::leaf(token)),
                    None => return Err(tree_err(offset, "token outside brackets")),
                }
            }
        }
    }

    if let Some(frame) = stack.last() {
        return Err(tree_err(
            input.len(),
            format!(
                "unbalanced at end of input: '(' at offset {} never closed",
                frame.open_offset
            ),
        ));
    }
    root.ok_or_else(|| tree_err(0, "empty input"))
}

fn close_frame(frame: Frame, close_offset: usize, at_top: bool) -> Result<ConstTree, CorpusError> {
    match frame.label {
        Some(label) => {
            if frame.children.is_empty() {
                return Err(tree_err(
                    close_offset,
                    format!("constituent '{label}' has no children"),
                ));
            }
            Ok(ConstTree::Node {
                label,
                children: frame.children,
            })
        }
        None => {
            if frame.children.is_empty() {
                return Err(tree_err(frame.open_offset, "empty constituent '()'"));
            }
            // Outer unlabeled wrapper: unwrap a single constituent child.
            if at_top && frame.children.len() == 1 && !frame.children[0].is_leaf() {
                let mut children = frame.children;
                return Ok(children.pop().expect("one child"));
            }
            Err(tree_err(frame.open_offset, "constituent without label"))
        }
    }
}
