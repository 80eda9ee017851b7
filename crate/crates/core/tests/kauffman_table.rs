use latband::knot::{kauffman, KnotTable, LaurentPoly2};

fn fixture() -> Vec<(String, LaurentPoly2)> {
    include_str!("data/knotinfo_kauffman.txt")
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let (name, rest) = l.split_once(':').unwrap();
            let terms = rest.split_whitespace().map(|t| {
                let v: Vec<i64> = t.split(':').map(|x| x.parse().unwrap()).collect();
                ((v[0] as i32, v[1] as i32), v[2])
            });
            (name.trim().to_string(), LaurentPoly2::from_terms(terms))
        })
        .collect()
}

#[test]
fn matches_knotinfo() {
    let table = KnotTable::bundled().unwrap();
    let fx = fixture();
    assert_eq!(fx.len(), table.records().len() - 1);
    for (name, want) in fx {
        let r = table.get(&name).unwrap();
        assert_eq!(kauffman(&r.pd).unwrap(), want, "{name}");
    }
}
