// Application logic: model selection, click-or-form probes, result panel,
// probe history, dataset overlay. Holds no classification logic of its
// own; every label shown comes from one classify response.

import { ApiClient, ClassifyResponse, DatasetInfo, ModelInfo } from "./api";
import { CLASS_COLORS, colorFor } from "./colors";
import type { MapAdapter } from "./map";

export interface ProbeRecord {
  lat: number;
  lon: number;
  response: ClassifyResponse;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export class AppController {
  readonly history: ProbeRecord[] = [];
  private models: ModelInfo[] = [];
  private datasets: DatasetInfo[] = [];
  private selectedModel: string | null = null;
  private probeSequence = 0;
  private overlayOn = false;

  private banner!: HTMLDivElement;
  private modelSelect!: HTMLSelectElement;
  private latInput!: HTMLInputElement;
  private lonInput!: HTMLInputElement;
  private classifyButton!: HTMLButtonElement;
  private formHint!: HTMLParagraphElement;
  private resultPanel!: HTMLDivElement;
  private historyList!: HTMLUListElement;
  private overlayToggle!: HTMLInputElement;
  private datasetSelect!: HTMLSelectElement;
  private limitInput!: HTMLInputElement;
  private overlayNotice!: HTMLSpanElement;

  constructor(
    private readonly root: HTMLElement,
    private readonly map: MapAdapter,
    private readonly api: ApiClient,
  ) {
    this.buildLayout();
    this.map.onClick((lat, lon) => void this.probe(lat, lon));
  }

  async start(): Promise<void> {
    try {
      [this.models, this.datasets] = await Promise.all([
        this.api.listModels(),
        this.api.listDatasets(),
      ]);
      this.hideBanner();
    } catch (err) {
      this.showBanner(String(err));
      return;
    }
    this.populateModelSelect();
    this.populateDatasetSelect();
    this.updateFormState();
  }

  // ---- probes --------------------------------------------------------

  async probe(lat: number, lon: number): Promise<void> {
    if (!this.selectedModel) return;
    const seq = ++this.probeSequence;
    let response: ClassifyResponse;
    try {
      response = await this.api.classify(this.selectedModel, lat, lon);
    } catch (err) {
      if (seq === this.probeSequence) this.showBanner(String(err));
      return;
    }
    if (seq !== this.probeSequence) return; // superseded by a newer gesture
    this.hideBanner();
    this.history.push({ lat, lon, response });
    this.map.setProbeMarker(
      lat,
      lon,
      colorFor(response.label),
      `${response.class_name} (${response.label})`,
    );
    this.renderResult(lat, lon, response);
    this.renderHistory();
  }

  private renderResult(lat: number, lon: number, response: ClassifyResponse): void {
    this.resultPanel.replaceChildren();
    const headline = el("div", "result-class");
    const swatch = el("span", "swatch");
    swatch.style.backgroundColor = colorFor(response.label);
    headline.append(
      swatch,
      el("strong", "result-label", `${response.label} ${response.class_name}`),
    );
    this.resultPanel.append(headline);
    this.resultPanel.append(
      el("p", "result-coords", `at ${lat.toFixed(4)}, ${lon.toFixed(4)}`),
    );

    if (!response.in_bbox) {
      this.resultPanel.append(
        el(
          "p",
          "warning",
          "Outside the model's data region; treat this classification with caution.",
        ),
      );
    }

    const probs = el("ul", "probabilities");
    response.classes.forEach((cls, i) => {
      const item = el("li");
      const name = response.class_names[i] ?? String(cls);
      item.textContent = `${name}: ${(response.probabilities[i] * 100).toFixed(1)}%`;
      probs.append(item);
    });
    this.resultPanel.append(probs);
  }

  private renderHistory(): void {
    this.historyList.replaceChildren();
    for (const probe of [...this.history].reverse()) {
      const item = el("li", "history-entry");
      item.textContent =
        `${probe.response.class_name} @ ${probe.lat.toFixed(3)}, ${probe.lon.toFixed(3)}` +
        (probe.response.in_bbox ? "" : " (outside region)");
      this.historyList.append(item);
    }
  }

  // ---- overlay -------------------------------------------------------

  async toggleOverlay(on: boolean): Promise<void> {
    this.overlayOn = on;
    if (!on) {
      this.map.clearOverlay();
      this.overlayNotice.textContent = "";
      return;
    }
    const dataset = this.datasetSelect.value;
    if (!dataset) {
      this.overlayNotice.textContent = "no dataset available";
      this.overlayToggle.checked = false;
      this.overlayOn = false;
      return;
    }
    const limit = Number(this.limitInput.value) || 1000;
    let points;
    try {
      points = await this.api.points(dataset, limit);
    } catch (err) {
      this.showBanner(String(err));
      this.overlayToggle.checked = false;
      this.overlayOn = false;
      return;
    }
    if (!this.overlayOn) return; // toggled off while loading
    this.hideBanner();
    this.map.showOverlay(points.points, colorFor);
    this.overlayNotice.textContent =
      points.returned === 0
        ? "dataset is empty"
        : `${points.returned} of ${points.total} points`;
  }

  // ---- wiring ---------------------------------------------------------

  selectModel(id: string | null): void {
    this.selectedModel = id;
    const model = this.models.find((m) => m.id === id);
    if (model?.bbox && model.bbox.length === 4) {
      const [latMin, latMax, lonMin, lonMax] = model.bbox;
      this.map.drawRegion({ latMin, latMax, lonMin, lonMax });
    }
    this.updateFormState();
  }

  get selectedModelId(): string | null {
    return this.selectedModel;
  }

  private updateFormState(): void {
    const enabled = this.selectedModel !== null;
    this.latInput.disabled = !enabled;
    this.lonInput.disabled = !enabled;
    this.classifyButton.disabled = !enabled;
    this.formHint.textContent = enabled
      ? ""
      : "Select a model to start classifying locations.";
  }

  private populateModelSelect(): void {
    this.modelSelect.replaceChildren();
    const placeholder = el("option", undefined, "choose a model...");
    placeholder.value = "";
    this.modelSelect.append(placeholder);
    for (const model of this.models) {
      const option = el("option");
      option.value = model.id;
      const accuracy = model.metrics?.accuracy;
      option.textContent = accuracy
        ? `${model.id} (accuracy ${(accuracy * 100).toFixed(1)}%)`
        : model.id;
      this.modelSelect.append(option);
    }
    this.modelSelect.addEventListener("change", () => {
      this.selectModel(this.modelSelect.value || null);
    });
  }

  private populateDatasetSelect(): void {
    this.datasetSelect.replaceChildren();
    for (const dataset of this.datasets) {
      const option = el("option");
      option.value = dataset.id;
      option.textContent = `${dataset.id} (${dataset.n_points} points)`;
      this.datasetSelect.append(option);
    }
  }

  showBanner(message: string): void {
    this.banner.textContent = message;
    this.banner.hidden = false;
  }

  hideBanner(): void {
    this.banner.hidden = true;
    this.banner.textContent = "";
  }

  private buildLayout(): void {
    this.banner = el("div", "banner");
    this.banner.hidden = true;

    const panel = el("aside", "panel");

    const modelBlock = el("section", "block");
    modelBlock.append(el("h2", undefined, "Model"));
    this.modelSelect = el("select", "model-select");
    modelBlock.append(this.modelSelect);

    const formBlock = el("section", "block");
    formBlock.append(el("h2", undefined, "Classify a location"));
    this.latInput = el("input", "lat-input");
    this.latInput.placeholder = "latitude";
    this.lonInput = el("input", "lon-input");
    this.lonInput.placeholder = "longitude";
    this.classifyButton = el("button", "classify-button", "Classify");
    this.classifyButton.addEventListener("click", () => {
      const lat = Number(this.latInput.value);
      const lon = Number(this.lonInput.value);
      if (Number.isFinite(lat) && Number.isFinite(lon)) {
        void this.probe(lat, lon);
      } else {
        this.showBanner("enter numeric coordinates");
      }
    });
    this.formHint = el("p", "form-hint");
    formBlock.append(this.latInput, this.lonInput, this.classifyButton, this.formHint);

    const resultBlock = el("section", "block");
    resultBlock.append(el("h2", undefined, "Result"));
    this.resultPanel = el("div", "result");
    resultBlock.append(this.resultPanel);

    const overlayBlock = el("section", "block");
    overlayBlock.append(el("h2", undefined, "Training data overlay"));
    this.overlayToggle = el("input", "overlay-toggle");
    this.overlayToggle.type = "checkbox";
    this.overlayToggle.addEventListener("change", () => {
      void this.toggleOverlay(this.overlayToggle.checked);
    });
    this.datasetSelect = el("select", "dataset-select");
    this.limitInput = el("input", "limit-input");
    this.limitInput.value = "1000";
    this.overlayNotice = el("span", "overlay-notice");
    overlayBlock.append(
      this.overlayToggle,
      this.datasetSelect,
      this.limitInput,
      this.overlayNotice,
    );

    const legendBlock = el("section", "block legend");
    legendBlock.append(el("h2", undefined, "Legend"));
    const legendList = el("ul");
    for (const [label, color] of Object.entries(CLASS_COLORS)) {
      const item = el("li");
      const swatch = el("span", "swatch");
      swatch.style.backgroundColor = color;
      item.append(swatch, document.createTextNode(` class ${label}`));
      legendList.append(item);
    }
    legendBlock.append(legendList);

    const historyBlock = el("section", "block");
    historyBlock.append(el("h2", undefined, "History"));
    this.historyList = el("ul", "history");
    historyBlock.append(this.historyList);

    panel.append(modelBlock, formBlock, resultBlock, overlayBlock, legendBlock, historyBlock);
    this.root.append(this.banner, panel);
  }
}
