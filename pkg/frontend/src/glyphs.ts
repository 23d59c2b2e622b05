/** Shape and color assignment. The paper encodes primitive type by shape but
 * fixes no mapping, so families cycle alphabetically through an 8-shape
 * palette; pipeline colors are index-based and stable for a selection. */

export const SHAPES = [
  "circle",
  "diamond",
  "hexagon",
  "pentagon",
  "square",
  "star",
  "triangle-down",
  "triangle-up",
] as const;

export type Shape = (typeof SHAPES)[number];

export function shapeByFamily(families: string[]): Map<string, Shape> {
  const distinct = [...new Set(families)].sort();
  const out = new Map<string, Shape>();
  distinct.forEach((family, i) => {
    out.set(family, SHAPES[i % SHAPES.length]);
  });
  return out;
}

export const PIPELINE_COLORS = [
  "#e41a1c",
  "#377eb8",
  "#4daf4a",
  "#984ea3",
  "#ff7f00",
  "#f0e442",
  "#a65628",
  "#f781bf",
];

export function colorForPipeline(selection: string[], pipelineId: string): string {
  const i = selection.indexOf(pipelineId);
  return PIPELINE_COLORS[((i % PIPELINE_COLORS.length) + PIPELINE_COLORS.length) % PIPELINE_COLORS.length];
}
