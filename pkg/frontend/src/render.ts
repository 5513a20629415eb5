/**
 * Abstract SVG views: faces as regular polygons with shared edge labels,
 * the quiver on a circle with degree badges, the potential as a term
 * list, and the verification trace step by step. Faithful to the
 * combinatorial model; no embedding is attempted.
 */

interface EdgeSideJson {
  label: string;
  kind: string;
  side?: string;
}

interface SurfaceJson {
  d: number;
  faces: EdgeSideJson[][];
}

interface ArrowJson {
  id: string;
  src: string;
  tgt: string;
  deg: number;
}

interface QspJson {
  d: number;
  vertices: string[];
  arrows: ArrowJson[];
  potential: { cycle: string[]; coeff: string }[];
}

const SVGNS = "http://www.w3.org/2000/svg";

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string>
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVGNS, tag);
  for (const [k, v] of Object.entries(attrs)) el.setAttribute(k, v);
  return el;
}

const PALETTE = [
  "#4363d8", "#e6194b", "#3cb44b", "#f58231", "#911eb4",
  "#4699c9", "#808000", "#9a6324", "#800000", "#469990",
];

function arcColor(labels: string[], label: string): string {
  const idx = labels.indexOf(label);
  return PALETTE[idx >= 0 ? idx % PALETTE.length : 0];
}

export function renderSurface(
  surface: SurfaceJson,
  onArcClick: (arc: string) => void,
  onBoundaryClick: () => void
): SVGSVGElement {
  const faces = surface.faces;
  const cols = Math.min(faces.length, 3);
  const rows = Math.ceil(faces.length / cols);
  const cell = 170;
  const svg = svgEl("svg", {
    width: String(cols * cell),
    height: String(rows * cell),
    viewBox: `0 0 ${cols * cell} ${rows * cell}`,
  });
  const arcLabels = [
    ...new Set(
      faces.flatMap((f) => f.filter((s) => s.kind === "arc").map((s) => s.label))
    ),
  ].sort();
  const counts: Record<string, number> = {};
  for (const face of faces)
    for (const side of face)
      if (side.kind === "arc")
        counts[side.label] = (counts[side.label] ?? 0) + 1;

  faces.forEach((face, fi) => {
    const cx = (fi % cols) * cell + cell / 2;
    const cy = Math.floor(fi / cols) * cell + cell / 2;
    const radius = cell * 0.38;
    const n = face.length;
    const corner = (k: number): [number, number] => [
      cx + radius * Math.sin((2 * Math.PI * k) / n),
      cy - radius * Math.cos((2 * Math.PI * k) / n),
    ];
    face.forEach((side, k) => {
      const [x1, y1] = corner(k);
      const [x2, y2] = corner(k + 1);
      const isArc = side.kind === "arc";
      const line = svgEl("line", {
        x1: String(x1), y1: String(y1), x2: String(x2), y2: String(y2),
        stroke: isArc ? arcColor(arcLabels, side.label) : "#999",
        "stroke-width": isArc ? "3" : "2",
        "stroke-dasharray": isArc ? "" : "5,4",
        cursor: "pointer",
      });
      line.addEventListener("click", () =>
        isArc ? onArcClick(side.label) : onBoundaryClick()
      );
      svg.appendChild(line);
      const mx = (x1 + x2) / 2 + ((x1 + x2) / 2 - cx) * 0.18;
      const my = (y1 + y2) / 2 + ((y1 + y2) / 2 - cy) * 0.18;
      const selfFolded =
        isArc && face.filter((s) => s.kind === "arc" && s.label === side.label).length === 2;
      const text = svgEl("text", {
        x: String(mx), y: String(my),
        "font-size": "11", "text-anchor": "middle",
        fill: isArc ? arcColor(arcLabels, side.label) : "#777",
      });
      text.textContent = isArc
        ? `${side.label}${side.side}${selfFolded ? " ★" : ""}`
        : side.label;
      svg.appendChild(text);
    });
  });
  return svg;
}

export function renderQuiver(qsp: QspJson): SVGSVGElement {
  const size = 300;
  const svg = svgEl("svg", {
    width: String(size), height: String(size),
    viewBox: `0 0 ${size} ${size}`,
  });
  const vertices = qsp.vertices;
  const pos: Record<string, [number, number]> = {};
  vertices.forEach((v, k) => {
    pos[v] = [
      size / 2 + size * 0.36 * Math.sin((2 * Math.PI * k) / vertices.length),
      size / 2 - size * 0.36 * Math.cos((2 * Math.PI * k) / vertices.length),
    ];
  });
  const seen: Record<string, number> = {};
  for (const arrow of qsp.arrows) {
    const key = [arrow.src, arrow.tgt].sort().join("|");
    const bend = (seen[key] = (seen[key] ?? 0) + 1);
    const [x1, y1] = pos[arrow.src];
    const [x2, y2] = pos[arrow.tgt];
    let d: string;
    let lx: number, ly: number;
    if (arrow.src === arrow.tgt) {
      const r = 14 + 10 * bend;
      d = `M ${x1} ${y1} a ${r} ${r} 0 1 1 0.1 0`;
      lx = x1 + r;
      ly = y1 - r;
    } else {
      const mx = (x1 + x2) / 2;
      const my = (y1 + y2) / 2;
      const nx = -(y2 - y1);
      const ny = x2 - x1;
      const norm = Math.hypot(nx, ny) || 1;
      const off = 14 * (bend - 1) + 8;
      const cxp = mx + (nx / norm) * off;
      const cyp = my + (ny / norm) * off;
      d = `M ${x1} ${y1} Q ${cxp} ${cyp} ${x2} ${y2}`;
      lx = (mx + cxp) / 2;
      ly = (my + cyp) / 2;
    }
    svg.appendChild(
      svgEl("path", { d, fill: "none", stroke: "#333", "marker-end": "url(#arrowhead)" })
    );
    const badge = svgEl("text", {
      x: String(lx), y: String(ly), "font-size": "10", fill: "#b22",
      "text-anchor": "middle",
    });
    badge.textContent = String(arrow.deg);
    svg.appendChild(badge);
  }
  const defs = svgEl("defs", {});
  const marker = svgEl("marker", {
    id: "arrowhead", markerWidth: "8", markerHeight: "8",
    refX: "7", refY: "4", orient: "auto",
  });
  marker.appendChild(svgEl("path", { d: "M 0 0 L 8 4 L 0 8 z", fill: "#333" }));
  defs.appendChild(marker);
  svg.appendChild(defs);
  for (const v of vertices) {
    const [x, y] = pos[v];
    svg.appendChild(
      svgEl("circle", { cx: String(x), cy: String(y), r: "13", fill: "#fff", stroke: "#333" })
    );
    const label = svgEl("text", {
      x: String(x), y: String(y + 4), "font-size": "11", "text-anchor": "middle",
    });
    label.textContent = v;
    svg.appendChild(label);
  }
  return svg;
}

export function renderPotential(qsp: QspJson): HTMLElement {
  const list = document.createElement("ul");
  list.className = "potential";
  if (qsp.potential.length === 0) {
    const li = document.createElement("li");
    li.textContent = "W = 0";
    list.appendChild(li);
  }
  for (const term of qsp.potential) {
    const li = document.createElement("li");
    const sign = term.coeff.startsWith("-") ? "− " : "+ ";
    li.textContent = sign + term.cycle.join(" · ");
    list.appendChild(li);
  }
  return list;
}

export function renderTrace(report: any): HTMLElement {
  const box = document.createElement("div");
  const headline = document.createElement("p");
  headline.textContent = report.pass
    ? "commutes up to quasi-isomorphism ✓"
    : "mismatch ✗";
  headline.className = report.pass ? "pass" : "fail";
  box.appendChild(headline);
  const list = document.createElement("ol");
  for (const step of report.trace ?? []) {
    const li = document.createElement("li");
    const repl = (step.p ?? [])
      .map((t: any) => `${t.coeff}·${t.path.join("·") || "e"}`)
      .join(" + ");
    li.textContent = `cancel (${step.a}, ${step.b}); ${step.b} ↦ -(1/${step.k1})(${repl || "0"})`;
    list.appendChild(li);
  }
  box.appendChild(list);
  return box;
}
