use super::{Grammar, NtId, RuleBody, RuleId};

/// One rule application. `children[i]` is the nonterminal node of the i-th
/// conjunct's group; the group's terminal leaves are implied by the span.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TreeNode {
    pub label: NtId,
    pub start: usize,
    pub end: usize,
    pub rule: RuleId,
    pub children: Vec<TreeNode>,
}

impl TreeNode {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    /// Preorder walk, visiting every group of every node.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a TreeNode)) {
        f(self);
        for c in &self.children {
            c.walk(f);
        }
    }
}

/// A parse tree of a whole input string. All child groups of a node span
/// the same leaves, so the structure is a DAG over a shared leaf sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParseTree {
    pub root: TreeNode,
}

impl ParseTree {
    /// Every node in preorder.
    pub fn nodes(&self) -> Vec<&TreeNode> {
        let mut out = Vec::new();
        self.root.walk(&mut |n| out.push(n));
        out
    }

    /// The input to the right of a subtree.
    pub fn follow<'w>(node: &TreeNode, w: &'w [char]) -> &'w [char] {
        &w[node.end..]
    }

    /// Indented rendering, one node per line.
    pub fn render(&self, g: &Grammar, w: &[char]) -> String {
        fn go(n: &TreeNode, g: &Grammar, w: &[char], depth: usize, out: &mut String) {
            let text: String = w[n.start..n.end].iter().collect();
            out.push_str(&format!(
                "{}{} [{}, {}) \"{}\" by {}\n",
                "  ".repeat(depth),
                g.name(n.label),
                n.start,
                n.end,
                text,
                g.display_rule(n.rule)
            ));
            for c in &n.children {
                go(c, g, w, depth + 1, out);
            }
        }
        let mut out = String::new();
        go(&self.root, g, w, 0, &mut out);
        out
    }
}

/// Checks that `t` is a parse tree of `w` as the start symbol of `g`.
pub fn check_tree(g: &Grammar, w: &[char], t: &ParseTree) -> bool {
    t.root.label == g.start()
        && t.root.start == 0
        && t.root.end == w.len()
        && check_node(g, w, &t.root)
}

fn check_node(g: &Grammar, w: &[char], n: &TreeNode) -> bool {
    if n.start > n.end || n.end > w.len() || n.rule >= g.rules().len() {
        return false;
    }
    let rule = g.rule(n.rule);
    if rule.lhs != n.label {
        return false;
    }
    let span = &w[n.start..n.end];
    match &rule.body {
        RuleBody::Terminal(y) => n.children.is_empty() && span == y.as_slice(),
        RuleBody::Conjunction(cs) => {
            n.children.len() == cs.len()
                && cs.iter().zip(&n.children).all(|(c, child)| {
                    c.context_len() <= span.len()
                        && span.starts_with(&c.prefix)
                        && span.ends_with(&c.suffix)
                        && child.label == c.body
                        && child.start == n.start + c.prefix.len()
                        && child.end == n.end - c.suffix.len()
                        && check_node(g, w, child)
                })
        }
    }
}
