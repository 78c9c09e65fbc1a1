//! The text syntax for groups, marked groups, words and sentences.

use marked_groups::dsl::{parse_spec, SpecAst};

fn main() {
    for text in [
        "Dih(Z^2 x Z/6)",
        "D12:a,b",
        "Z x Z/4:(1;0),(0;1)",
        "g1*g2^-3*g1^2",
        "forall x y : (x^2 != 1 & y^2 != 1) -> x*y = y*x",
        "@P3",
        "D7",
        "forall x : x*y = 1",
    ] {
        match parse_spec(text) {
            Ok(ast) => {
                let kind = match &ast {
                    SpecAst::Group(_) => "group",
                    SpecAst::Marked(_) => "marked group",
                    SpecAst::Element(_) => "element",
                    SpecAst::Word(_) => "word",
                    SpecAst::Sentence(_) => "sentence",
                };
                println!("{kind:12} {ast}");
            }
            Err(e) => println!("error        {text:?}: {e}"),
        }
    }
}
