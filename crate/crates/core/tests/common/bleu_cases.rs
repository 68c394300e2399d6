//! BLEU values computed by `oracles/bleu_oracle.py` (explicit n-gram
//! enumeration), frozen here. Scores are on the 0-100 scale for corpus
//! cases and 0-1 for smoothed sentence cases.

pub const CORPUS_CASES: &[(&[&str], &[&str], f64)] = &[
    (&["the cat sat on the mat"], &["the cat sat on the mat"], 100.0),
    (&["a b c d"], &["a b c d e"], 77.8800783071405),
    (&["the the the the"], &["the cat"], 0.0),
    (&["the cat is on the mat today"], &["the cat sat on the mat"], 0.0),
    (
        &["he drove for super aguri in 2006 and 2007"],
        &["he drove for super aguri fernandez racing in 2006"],
        51.334504804017044,
    ),
    (
        &["in 2004 the team finished 14th ."],
        &["in 2004 , the team finished in 14th place ."],
        0.0,
    ),
    (&["a b c d e f g h"], &["a b c d x f g h"], 50.0),
    (
        &["one two three four five", "six seven eight nine ten"],
        &["one two three four five", "six seven eight nine"],
        83.75922397086269,
    ),
    (
        &["the film grossed 603,805 dollars ."],
        &["the film grossed $ 603,805 ."],
        0.0,
    ),
    (
        &["x y z w", "a b c d e"],
        &["x y z w q", "a b c d e"],
        89.48393168143697,
    ),
    (&["a a a b b b c c c d d d"], &["a b c d a b c d a b c d"], 0.0),
    (
        &["the quick brown fox jumps over the lazy dog"],
        &["the quick brown dog jumps over the lazy fox"],
        45.96613576124592,
    ),
    (
        &["w1 w2 w3 w4 w5 w6 w7 w8 w9 w10 w11"],
        &["w1 w2 w3 w4 w5 w6 w7 w8 w9 w10 w11 w12 w13 w14"],
        76.13003866968737,
    ),
    (
        &["s1 s2 s3 s4", "t1 t2", "u1 u2 u3 u4 u5"],
        &["s1 s2 s3 s4 s5", "t1 t2 t3", "u1 u2 u3 u4 u5 u6"],
        76.13003866968737,
    ),
    (
        &["The Team won.", "the team won."],
        &["the team won.", "The Team won."],
        0.0,
    ),
    (
        &["the team finished in 14th place in 2004 ."],
        &["in 2004 , the team finished in 14th place ."],
        60.882624050711414,
    ),
    (
        &["alpha beta gamma delta epsilon zeta", "eta theta iota kappa"],
        &["alpha beta gamma delta epsilon", "eta theta iota kappa lambda mu"],
        75.78847995449105,
    ),
    (
        &["he won the race in 1998 and again in 2001 ."],
        &["he won the race in 1998 and 2001 ."],
        63.15552371794036,
    ),
    (
        &["3.55 cells were highlighted on average"],
        &["on average 3.55 cells were highlighted"],
        60.42750794713536,
    ),
];
pub const SENTENCE_CASES: &[(&str, &str, f64)] = &[
    ("a b", "a b c", 0.6065306597126334),
    ("a b c d", "a b c d", 1.0),
    ("", "a b c", 0.0),
    ("x y", "a b c", 0.0),
    ("a b c d e", "a b c d e f g", 0.6703200460356393),
    (
        "the team finished 14th",
        "in 2004 the team finished 14th .",
        0.4723665527410147,
    ),
    ("a x b y", "a b x y", 0.4518010018049224),
    ("the the the", "the cat", 0.4854917717073234),
    (
        "he drove for the team in 2005 .",
        "he drove for the team in 2005 .",
        1.0,
    ),
    (
        "he drove for the team in 2005 .",
        "in 2005 he drove for the team .",
        0.6147881529512644,
    ),
    ("one", "one", 1.0),
    ("one two three four five six", "one two three", 0.33437015248821106),
];
