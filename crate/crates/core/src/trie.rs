//! Prefix trie over region paths, so that one tree walk serves every
//! registered region sharing a prefix.

#[derive(Debug, Clone, Default)]
pub(crate) struct TrieNode {
    pub children: [Option<u32>; 8],
    /// Indices of regions whose path ends at this node.
    pub ends: Vec<usize>,
}

#[derive(Debug, Clone)]
pub(crate) struct PrefixTrie {
    pub nodes: Vec<TrieNode>,
    /// Length of the longest inserted path.
    pub max_depth: usize,
    pub len: usize,
}

impl PrefixTrie {
    /// `paths` yields, per region, its sequence of child slots (each < 8).
    pub fn build<I, P>(paths: I) -> Self
    where
        I: IntoIterator<Item = P>,
        P: IntoIterator<Item = usize>,
    {
        let mut nodes = vec![TrieNode::default()];
        let mut max_depth = 0;
        let mut len = 0;
        for (id, path) in paths.into_iter().enumerate() {
            let mut cur = 0usize;
            let mut depth = 0;
            for slot in path {
                depth += 1;
                cur = match nodes[cur].children[slot] {
                    Some(next) => next as usize,
                    None => {
                        nodes.push(TrieNode::default());
                        let next = nodes.len() - 1;
                        nodes[cur].children[slot] = Some(next as u32);
                        next
                    }
                };
            }
            nodes[cur].ends.push(id);
            max_depth = max_depth.max(depth);
            len = id + 1;
        }
        PrefixTrie {
            nodes,
            max_depth,
            len,
        }
    }

    pub fn root(&self) -> &TrieNode {
        &self.nodes[0]
    }

    pub fn node(&self, idx: u32) -> &TrieNode {
        &self.nodes[idx as usize]
    }
}
