// Thin abstraction over the slippy map so application logic is testable
// without a real renderer. LeafletMap is the production implementation.

import type { LabeledPoint } from "./api";

export interface MapAdapter {
  onClick(handler: (lat: number, lon: number) => void): void;
  setProbeMarker(lat: number, lon: number, color: string, tooltip: string): void;
  showOverlay(points: LabeledPoint[], colorFor: (label: number) => string): void;
  clearOverlay(): void;
  overlaySize(): number;
  drawRegion(bounds: { latMin: number; latMax: number; lonMin: number; lonMax: number }): void;
}

export async function createLeafletMap(container: HTMLElement): Promise<MapAdapter> {
  const L = await import("leaflet");

  const map = L.map(container).setView([33.2, 43.7], 6);
  L.tileLayer("https://tile.openstreetmap.org/{z}/{x}/{y}.png", {
    maxZoom: 12,
    attribution: "&copy; OpenStreetMap contributors",
  }).addTo(map);

  let probeMarker: L.CircleMarker | null = null;
  let overlay: L.LayerGroup | null = null;
  let overlayCount = 0;
  let region: L.Rectangle | null = null;

  const clearOverlay = () => {
    if (overlay) {
      overlay.remove();
      overlay = null;
      overlayCount = 0;
    }
  };

  return {
    onClick(handler) {
      map.on("click", (event: L.LeafletMouseEvent) => {
        handler(event.latlng.lat, event.latlng.lng);
      });
    },

    setProbeMarker(lat, lon, color, tooltip) {
      if (probeMarker) probeMarker.remove();
      probeMarker = L.circleMarker([lat, lon], {
        radius: 9,
        color: "#222",
        weight: 2,
        fillColor: color,
        fillOpacity: 0.9,
      })
        .addTo(map)
        .bindTooltip(tooltip);
    },

    showOverlay(points, colorForLabel) {
      clearOverlay();
      const layer = L.layerGroup();
      for (const point of points) {
        L.circleMarker([point.lat, point.lon], {
          radius: 3,
          stroke: false,
          fillColor: colorForLabel(point.label),
          fillOpacity: 0.55,
        }).addTo(layer);
      }
      layer.addTo(map);
      overlay = layer;
      overlayCount = points.length;
    },

    clearOverlay,

    overlaySize() {
      return overlayCount;
    },

    drawRegion(bounds) {
      if (region) region.remove();
      region = L.rectangle(
        [
          [bounds.latMin, bounds.lonMin],
          [bounds.latMax, bounds.lonMax],
        ],
        { color: "#444", weight: 1.5, fill: false, dashArray: "6 4" },
      ).addTo(map);
    },
  };
}
