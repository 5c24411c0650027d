// Typed client for the classification service. The UI never computes a
// label itself: everything rendered traces back to one of these calls.

export interface ModelInfo {
  id: string;
  algorithm: string;
  class_labels: number[];
  class_names: string[];
  dataset_id: string;
  metrics?: { accuracy?: number; min_f1?: number } | null;
  bbox?: number[] | null;
}

export interface ClassifyResponse {
  model_id: string;
  label: number;
  class_name: string;
  classes: number[];
  class_names: string[];
  probabilities: number[];
  in_bbox: boolean;
}

export interface DatasetInfo {
  id: string;
  n_points: number;
  classes: number[];
  class_counts: Record<string, number>;
}

export interface LabeledPoint {
  lat: number;
  lon: number;
  label: number;
}

export interface PointsResponse {
  dataset: string;
  total: number;
  returned: number;
  classes: number[];
  points: LabeledPoint[];
}

export class ApiError extends Error {
  constructor(message: string, readonly status?: number) {
    super(message);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(url, init);
  } catch (err) {
    throw new ApiError(`service unreachable: ${String(err)}`);
  }
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      if (body && body.detail) detail = JSON.stringify(body.detail);
    } catch {
      // keep the status text
    }
    throw new ApiError(`${response.status}: ${detail}`, response.status);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(readonly baseUrl: string = "") {}

  listModels(): Promise<ModelInfo[]> {
    return request(`${this.baseUrl}/api/models`);
  }

  listDatasets(): Promise<DatasetInfo[]> {
    return request(`${this.baseUrl}/api/datasets`);
  }

  classify(modelId: string, lat: number, lon: number): Promise<ClassifyResponse> {
    return request(`${this.baseUrl}/api/classify`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ model_id: modelId, lat, lon }),
    });
  }

  points(dataset: string, limit: number): Promise<PointsResponse> {
    const params = new URLSearchParams({ dataset, limit: String(limit) });
    return request(`${this.baseUrl}/api/points?${params}`);
  }
}
