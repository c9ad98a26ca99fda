import { ApiClient, apiBaseFromLocation } from "./api.js";
import { boot } from "./app.js";

const root = document.getElementById("app");
if (root) {
  boot(new ApiClient(apiBaseFromLocation()), root).catch((err) => {
    root.innerHTML = `<div class="boot-error">
      <h2>Could not reach the scoring service</h2>
      <p>${String(err)}</p>
      <p>Start it with <code>rolescore serve --results DIR --port 8080</code>
      or point this page at it with <code>?api=http://host:port</code>.</p>
    </div>`;
  });
}
