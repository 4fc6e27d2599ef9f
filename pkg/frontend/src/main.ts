import { ApiClient } from "./api/client";
import { App } from "./app";
import "./styles.css";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app container");

const client = new ApiClient("/api/v1");
const app = new App(root, client);
app.ready.catch((err) => {
  root.textContent = `failed to reach the analysis service: ${err}`;
});
