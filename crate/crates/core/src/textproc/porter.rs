//! Classic Porter suffix-stripping stemmer.
//!
//! Follows the reference implementation, including its documented departures
//! from the 1980 paper (`bli` -> `ble`, the `logi` -> `log` rule, and leaving
//! one- and two-letter words untouched).

// the rule tables keep the reference algorithm's one-arm-per-ending shape;
// ends() sets the stem boundary as a side effect, so arms cannot be merged
#![allow(clippy::collapsible_match, clippy::if_same_then_else)]

/// Stem a lowercase token. Tokens containing anything other than ASCII
/// letters are returned unchanged, as are tokens of fewer than three letters.
pub fn stem(word: &str) -> String {
    if word.len() <= 2 || !word.bytes().all(|b| b.is_ascii_lowercase()) {
        return word.to_string();
    }
    let mut s = Stemmer {
        b: word.as_bytes().to_vec(),
        k: word.len() - 1,
        stem_len: 0,
    };
    s.step1ab();
    s.step1c();
    s.step2();
    s.step3();
    s.step4();
    s.step5();
    s.b.truncate(s.k + 1);
    String::from_utf8(s.b).expect("stemmer operates on ASCII")
}

struct Stemmer {
    b: Vec<u8>,
    /// Index of the last letter of the current word.
    k: usize,
    /// Length of the stem left when a candidate ending matches; the ending
    /// may cover the whole word, leaving an empty stem.
    stem_len: usize,
}

impl Stemmer {
    fn is_consonant(&self, i: usize) -> bool {
        match self.b[i] {
            b'a' | b'e' | b'i' | b'o' | b'u' => false,
            b'y' => i == 0 || !self.is_consonant(i - 1),
            _ => true,
        }
    }

    /// Number of consonant-vowel sequences in the stem.
    fn measure(&self) -> usize {
        let mut n = 0;
        let mut i = 0;
        loop {
            if i >= self.stem_len {
                return n;
            }
            if !self.is_consonant(i) {
                break;
            }
            i += 1;
        }
        i += 1;
        loop {
            loop {
                if i >= self.stem_len {
                    return n;
                }
                if self.is_consonant(i) {
                    break;
                }
                i += 1;
            }
            i += 1;
            n += 1;
            loop {
                if i >= self.stem_len {
                    return n;
                }
                if !self.is_consonant(i) {
                    break;
                }
                i += 1;
            }
            i += 1;
        }
    }

    fn vowel_in_stem(&self) -> bool {
        (0..self.stem_len).any(|i| !self.is_consonant(i))
    }

    fn double_consonant(&self, i: usize) -> bool {
        i >= 1 && self.b[i] == self.b[i - 1] && self.is_consonant(i)
    }

    /// consonant - vowel - consonant ending at `i`, where the final consonant
    /// is not w, x or y. Used to detect stems like `hop` that restore an `e`.
    fn cvc(&self, i: usize) -> bool {
        if i < 2 || !self.is_consonant(i) || self.is_consonant(i - 1) || !self.is_consonant(i - 2) {
            return false;
        }
        !matches!(self.b[i], b'w' | b'x' | b'y')
    }

    fn ends(&mut self, s: &[u8]) -> bool {
        if s.len() > self.k + 1 || &self.b[self.k + 1 - s.len()..=self.k] != s {
            return false;
        }
        self.stem_len = self.k + 1 - s.len();
        true
    }

    fn set_to(&mut self, s: &[u8]) {
        self.b.truncate(self.stem_len);
        self.b.extend_from_slice(s);
        self.k = self.stem_len + s.len() - 1;
    }

    fn replace_if_measure(&mut self, s: &[u8]) {
        if self.measure() > 0 {
            self.set_to(s);
        }
    }

    /// Plural endings and -ed/-ing.
    fn step1ab(&mut self) {
        if self.b[self.k] == b's' {
            if self.ends(b"sses") {
                self.k -= 2;
            } else if self.ends(b"ies") {
                self.set_to(b"i");
            } else if self.b[self.k - 1] != b's' {
                self.k -= 1;
            }
        }
        if self.ends(b"eed") {
            if self.measure() > 0 {
                self.k -= 1;
            }
        } else if (self.ends(b"ed") || self.ends(b"ing")) && self.vowel_in_stem() {
            // a stem with a vowel is non-empty, so k stays in range
            self.k = self.stem_len - 1;
            if self.ends(b"at") {
                self.set_to(b"ate");
            } else if self.ends(b"bl") {
                self.set_to(b"ble");
            } else if self.ends(b"iz") {
                self.set_to(b"ize");
            } else if self.double_consonant(self.k) {
                self.k -= 1;
                if matches!(self.b[self.k], b'l' | b's' | b'z') {
                    self.k += 1;
                }
            } else if self.measure() == 1 && self.cvc(self.k) {
                self.set_to(b"e");
            }
        }
    }

    /// Terminal y -> i when there is another vowel in the stem.
    fn step1c(&mut self) {
        if self.ends(b"y") && self.vowel_in_stem() {
            self.b[self.k] = b'i';
        }
    }

    /// Double suffixes mapped to single ones, e.g. -ization -> -ize.
    fn step2(&mut self) {
        if self.k == 0 {
            return;
        }
        match self.b[self.k - 1] {
            b'a' => {
                if self.ends(b"ational") {
                    self.replace_if_measure(b"ate");
                } else if self.ends(b"tional") {
                    self.replace_if_measure(b"tion");
                }
            }
            b'c' => {
                if self.ends(b"enci") {
                    self.replace_if_measure(b"ence");
                } else if self.ends(b"anci") {
                    self.replace_if_measure(b"ance");
                }
            }
            b'e' => {
                if self.ends(b"izer") {
                    self.replace_if_measure(b"ize");
                }
            }
            b'l' => {
                if self.ends(b"bli") {
                    self.replace_if_measure(b"ble");
                } else if self.ends(b"alli") {
                    self.replace_if_measure(b"al");
                } else if self.ends(b"entli") {
                    self.replace_if_measure(b"ent");
                } else if self.ends(b"eli") {
                    self.replace_if_measure(b"e");
                } else if self.ends(b"ousli") {
                    self.replace_if_measure(b"ous");
                }
            }
            b'o' => {
                if self.ends(b"ization") {
                    self.replace_if_measure(b"ize");
                } else if self.ends(b"ation") {
                    self.replace_if_measure(b"ate");
                } else if self.ends(b"ator") {
                    self.replace_if_measure(b"ate");
                }
            }
            b's' => {
                if self.ends(b"alism") {
                    self.replace_if_measure(b"al");
                } else if self.ends(b"iveness") {
                    self.replace_if_measure(b"ive");
                } else if self.ends(b"fulness") {
                    self.replace_if_measure(b"ful");
                } else if self.ends(b"ousness") {
                    self.replace_if_measure(b"ous");
                }
            }
            b't' => {
                if self.ends(b"aliti") {
                    self.replace_if_measure(b"al");
                } else if self.ends(b"iviti") {
                    self.replace_if_measure(b"ive");
                } else if self.ends(b"biliti") {
                    self.replace_if_measure(b"ble");
                }
            }
            b'g' => {
                if self.ends(b"logi") {
                    self.replace_if_measure(b"log");
                }
            }
            _ => {}
        }
    }

    /// -ic-, -full, -ness etc.
    fn step3(&mut self) {
        match self.b[self.k] {
            b'e' => {
                if self.ends(b"icate") {
                    self.replace_if_measure(b"ic");
                } else if self.ends(b"ative") {
                    self.replace_if_measure(b"");
                } else if self.ends(b"alize") {
                    self.replace_if_measure(b"al");
                }
            }
            b'i' => {
                if self.ends(b"iciti") {
                    self.replace_if_measure(b"ic");
                }
            }
            b'l' => {
                if self.ends(b"ical") {
                    self.replace_if_measure(b"ic");
                } else if self.ends(b"ful") {
                    self.replace_if_measure(b"");
                }
            }
            b's' => {
                if self.ends(b"ness") {
                    self.replace_if_measure(b"");
                }
            }
            _ => {}
        }
    }

    /// Drop -ant, -ence etc. in the context measure > 1.
    fn step4(&mut self) {
        if self.k == 0 {
            return;
        }
        let matched = match self.b[self.k - 1] {
            b'a' => self.ends(b"al"),
            b'c' => self.ends(b"ance") || self.ends(b"ence"),
            b'e' => self.ends(b"er"),
            b'i' => self.ends(b"ic"),
            b'l' => self.ends(b"able") || self.ends(b"ible"),
            b'n' => {
                self.ends(b"ant")
                    || self.ends(b"ement")
                    || self.ends(b"ment")
                    || self.ends(b"ent")
            }
            b'o' => {
                (self.ends(b"ion")
                    && self.stem_len >= 1
                    && matches!(self.b[self.stem_len - 1], b's' | b't'))
                    || self.ends(b"ou")
            }
            b's' => self.ends(b"ism"),
            b't' => self.ends(b"ate") || self.ends(b"iti"),
            b'u' => self.ends(b"ous"),
            b'v' => self.ends(b"ive"),
            b'z' => self.ends(b"ize"),
            _ => false,
        };
        if matched && self.measure() > 1 {
            // measure > 1 implies a stem of at least two letters
            self.k = self.stem_len - 1;
        }
    }

    /// Remove a final -e and reduce -ll in long stems.
    fn step5(&mut self) {
        self.stem_len = self.k + 1;
        if self.k >= 1 && self.b[self.k] == b'e' {
            let a = self.measure();
            if a > 1 || (a == 1 && !self.cvc(self.k - 1)) {
                self.k -= 1;
            }
        }
        if self.b[self.k] == b'l' && self.double_consonant(self.k) && self.measure() > 1 {
            self.k -= 1;
        }
    }
}
