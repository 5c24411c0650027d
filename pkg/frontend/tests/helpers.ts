import type { ClassifyResponse, DatasetInfo, ModelInfo } from "../src/api";

export const MODELS: ModelInfo[] = [
  {
    id: "dt-0-194",
    algorithm: "decision_tree",
    class_labels: [0, 194],
    class_names: ["Refugees", "Fight with artillery and tanks"],
    dataset_id: "0-194",
    metrics: { accuracy: 0.7548, min_f1: 0.74 },
    bbox: [29.12, 37.29, 39.22, 48.48],
  },
];

export const DATASETS: DatasetInfo[] = [
  { id: "demo", n_points: 4000, classes: [0, 194], class_counts: { "0": 2500, "194": 1500 } },
];

export function classifyResponse(
  label: number,
  inBbox = true,
  probabilities: number[] = label === 0 ? [0.9, 0.1] : [0.2, 0.8],
): ClassifyResponse {
  return {
    model_id: "dt-0-194",
    label,
    class_name: label === 0 ? "Refugees" : "Fight with artillery and tanks",
    classes: [0, 194],
    class_names: ["Refugees", "Fight with artillery and tanks"],
    probabilities,
    in_bbox: inBbox,
  };
}

export function jsonResponse(payload: unknown, status = 200): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

export function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}
