//! Character trie over dictionary surfaces.

use std::collections::BTreeMap;

#[derive(Debug, Default, Clone)]
struct Node {
    children: BTreeMap<char, usize>,
    values: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Trie {
    nodes: Vec<Node>,
}

impl Default for Trie {
    fn default() -> Self {
        Trie {
            nodes: vec![Node::default()],
        }
    }
}

impl Trie {
    pub fn insert(&mut self, key: &str, value: usize) {
        let mut cur = 0;
        for c in key.chars() {
            cur = match self.nodes[cur].children.get(&c) {
                Some(&next) => next,
                None => {
                    let next = self.nodes.len();
                    self.nodes.push(Node::default());
                    self.nodes[cur].children.insert(c, next);
                    next
                }
            };
        }
        self.nodes[cur].values.push(value);
    }

    pub fn get(&self, key: &str) -> &[usize] {
        let mut cur = 0;
        for c in key.chars() {
            match self.nodes[cur].children.get(&c) {
                Some(&next) => cur = next,
                None => return &[],
            }
        }
        &self.nodes[cur].values
    }

    /// Every stored key that is a prefix of `text[start..]`, as
    /// `(end offset, values)` in increasing end order.
    pub fn prefixes_at<'a>(&'a self, text: &'a [char], start: usize) -> PrefixIter<'a> {
        PrefixIter {
            trie: self,
            text,
            pos: start,
            node: Some(0),
        }
    }
}

pub struct PrefixIter<'a> {
    trie: &'a Trie,
    text: &'a [char],
    pos: usize,
    node: Option<usize>,
}

impl<'a> Iterator for PrefixIter<'a> {
    type Item = (usize, &'a [usize]);

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let node = self.node?;
            let c = *self.text.get(self.pos)?;
            match self.trie.nodes[node].children.get(&c) {
                Some(&next) => {
                    self.pos += 1;
                    self.node = Some(next);
                    let values = &self.trie.nodes[next].values;
                    if !values.is_empty() {
                        return Some((self.pos, values));
                    }
                }
                None => {
                    self.node = None;
                    return None;
                }
            }
        }
    }
}
