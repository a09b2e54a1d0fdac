//! Exhaustive enumeration of `Σ^{≤n}` in shortlex order.

/// Number of words of length exactly `len`.
pub fn count_of_len(alphabet_size: usize, len: usize) -> usize {
    alphabet_size.pow(len as u32)
}

/// Number of words of length at most `max_len`.
pub fn count_up_to(alphabet_size: usize, max_len: usize) -> usize {
    (0..=max_len).map(|l| count_of_len(alphabet_size, l)).sum()
}

/// The `index`-th word of length `len`, lexicographic in alphabet order.
pub fn word_at(alphabet: &[char], len: usize, mut index: usize) -> Vec<char> {
    let base = alphabet.len();
    let mut w = vec![' '; len];
    for slot in w.iter_mut().rev() {
        *slot = alphabet[index % base];
        index /= base;
    }
    w
}

/// All words of length exactly `len`.
pub fn words_of_len(alphabet: &[char], len: usize) -> impl Iterator<Item = Vec<char>> + '_ {
    let n = if alphabet.is_empty() && len > 0 {
        0
    } else {
        count_of_len(alphabet.len(), len)
    };
    (0..n).map(move |i| word_at(alphabet, len, i))
}

/// All words of length at most `max_len`, shortest first.
pub fn words_up_to(alphabet: &[char], max_len: usize) -> impl Iterator<Item = Vec<char>> + '_ {
    (0..=max_len).flat_map(move |l| words_of_len(alphabet, l))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(count_up_to(3, 10), 88_573);
        assert_eq!(words_up_to(&['a', 'b', 'c'], 10).count(), 88_573);
        assert_eq!(words_up_to(&[], 3).count(), 1);
    }

    #[test]
    fn shortlex() {
        let ws: Vec<String> = words_up_to(&['a', 'b'], 2)
            .map(|w| w.into_iter().collect())
            .collect();
        assert_eq!(ws, ["", "a", "b", "aa", "ab", "ba", "bb"]);
    }
}
