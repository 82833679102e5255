import { createApp } from "./app";

const params = new URLSearchParams(window.location.search);
const fromQuery = params.get("api");
if (fromQuery) window.localStorage.setItem("patrol.api", fromQuery);

const baseUrl =
  fromQuery ?? window.localStorage.getItem("patrol.api") ?? "http://127.0.0.1:8630";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app container");

void createApp(root, { baseUrl }).start();
