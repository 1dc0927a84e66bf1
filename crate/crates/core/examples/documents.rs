//! Canonical JSON documents for the decorated census, and surgery coefficients.

use qhi::io::surgery::{surgery_coefficients, Holonomy, DEFAULT_HEIGHT};
use qhi::io::{census_documents, parse, serialize, Mode};

fn main() -> anyhow::Result<()> {
    for doc in census_documents() {
        let text = serialize(&doc);
        let same = serialize(&parse(&text, Mode::Strict)?) == text;
        let l = doc.load()?;
        println!("{:18} {} bytes, round trip {same}, counts {:?}", doc.name, text.len(), l.tri.counts());
    }
    for (a, b) in [("parabolic:2", "parabolic:3"), ("cartan:4", "cartan:2")] {
        let c = surgery_coefficients(&a.parse::<Holonomy>()?, &b.parse::<Holonomy>()?, DEFAULT_HEIGHT)?;
        println!("{a} {b} → (s, r) = ({}, {})", c.s, c.r);
    }
    Ok(())
}
