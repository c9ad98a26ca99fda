// Small SVG radar of per-category weight subtotals; optionally overlays the
// baseline profile's shape for comparison.

export const CATEGORY_ORDER = [
  "Detection",
  "Coverage",
  "Reasoning",
  "Efficiency",
  "ToolUse",
  "Risk",
  "Robustness",
];

const SHORT_LABELS: Record<string, string> = {
  Detection: "Det",
  Coverage: "Cov",
  Reasoning: "Rea",
  Efficiency: "Eff",
  ToolUse: "Tool",
  Risk: "Risk",
  Robustness: "Rob",
};

function points(
  totals: Record<string, number>,
  scaleMax: number,
  cx: number,
  cy: number,
  radius: number,
): string {
  return CATEGORY_ORDER.map((category, i) => {
    const angle = (Math.PI * 2 * i) / CATEGORY_ORDER.length - Math.PI / 2;
    const value = Math.min((totals[category] ?? 0) / scaleMax, 1);
    const x = cx + Math.cos(angle) * radius * value;
    const y = cy + Math.sin(angle) * radius * value;
    return `${x.toFixed(1)},${y.toFixed(1)}`;
  }).join(" ");
}

export function radarSvg(
  totals: Record<string, number>,
  baseline: Record<string, number> | null = null,
  size = 220,
): string {
  const cx = size / 2;
  const cy = size / 2;
  const radius = size / 2 - 26;
  const observed = [...Object.values(totals), ...(baseline ? Object.values(baseline) : [])];
  const scaleMax = Math.max(20, ...observed);

  const rings = [0.25, 0.5, 0.75, 1]
    .map(
      (f) =>
        `<circle cx="${cx}" cy="${cy}" r="${(radius * f).toFixed(1)}" class="radar-ring"/>`,
    )
    .join("");
  const axes = CATEGORY_ORDER.map((category, i) => {
    const angle = (Math.PI * 2 * i) / CATEGORY_ORDER.length - Math.PI / 2;
    const x = cx + Math.cos(angle) * radius;
    const y = cy + Math.sin(angle) * radius;
    const lx = cx + Math.cos(angle) * (radius + 14);
    const ly = cy + Math.sin(angle) * (radius + 14);
    return (
      `<line x1="${cx}" y1="${cy}" x2="${x.toFixed(1)}" y2="${y.toFixed(1)}" class="radar-axis"/>` +
      `<text x="${lx.toFixed(1)}" y="${ly.toFixed(1)}" class="radar-label">${SHORT_LABELS[category]}</text>`
    );
  }).join("");

  const baselineShape = baseline
    ? `<polygon points="${points(baseline, scaleMax, cx, cy, radius)}" class="radar-baseline"/>`
    : "";
  const shape = `<polygon points="${points(totals, scaleMax, cx, cy, radius)}" class="radar-shape"/>`;

  return (
    `<svg viewBox="0 0 ${size} ${size}" width="${size}" height="${size}" role="img">` +
    rings +
    axes +
    baselineShape +
    shape +
    "</svg>"
  );
}
