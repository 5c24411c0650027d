import "leaflet/dist/leaflet.css";
import "./style.css";

import { ApiClient } from "./api";
import { AppController } from "./controller";
import { createLeafletMap } from "./map";

const apiBase = import.meta.env.VITE_API_BASE ?? "";

async function boot() {
  const mapContainer = document.getElementById("map");
  const panelRoot = document.getElementById("app");
  if (!mapContainer || !panelRoot) throw new Error("missing #map or #app container");

  const map = await createLeafletMap(mapContainer);
  const controller = new AppController(panelRoot, map, new ApiClient(apiBase));
  await controller.start();
}

void boot();
