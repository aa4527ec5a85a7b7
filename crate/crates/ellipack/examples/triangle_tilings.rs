// Triangle tilings with exact vertices: the moment triangle of (m,n) cut
// into standard pieces, its complement in the ambient simplex, and unit
// triangles packed into the triangle of (1,k). Writes SVG pictures.

use ellipack::rational::format_rational;
use ellipack::toric::{
    decompose_complement, decompose_ellipsoid, pack_unit_triangles, render_svg, RenderObject,
};

fn main() {
    for (m, n) in [(1, 3), (2, 5), (3, 8)] {
        let tiles = decompose_ellipsoid(m, n).unwrap();
        let sizes: Vec<String> = tiles.iter().map(|t| format_rational(&t.size)).collect();
        println!("triangle of ({m},{n}): {} tiles of sizes {}", tiles.len(), sizes.join(" "));
    }

    // the complement of the (3,8)-triangle inside the ambient simplex
    let comp = decompose_complement(3, 8).unwrap();
    println!("complement of (3,8): {} tiles", comp.len());
    for t in &comp {
        let vs: Vec<String> = t
            .vertices
            .iter()
            .map(|p| format!("({},{})", format_rational(&p.0), format_rational(&p.1)))
            .collect();
        println!("  size {}: {}", format_rational(&t.size), vs.join(" "));
    }

    // k disjoint unit triangles fill the triangle of (1,k) completely
    let maps = pack_unit_triangles(5);
    println!("packed {} unit triangles, all unimodular: {}",
        maps.len(),
        maps.iter().all(|m| m.is_unimodular()));

    let dir = std::env::temp_dir();
    for (name, svg) in [
        ("tiles_3_8.svg", render_svg(&RenderObject::Triangles(&decompose_ellipsoid(3, 8).unwrap()))),
        ("pack_5.svg", render_svg(&RenderObject::Packing { maps: &maps, width: 5 })),
    ] {
        let path = dir.join(name);
        std::fs::write(&path, svg).unwrap();
        println!("wrote {}", path.display());
    }
}
