import { ApiClient } from "./api.js";
import { drawScene, fitView, pickTerminal } from "./canvas.js";
import { WorkbenchController, type Mode } from "./controller.js";
import { buildScene } from "./scene.js";

/** DOM bootstrap: everything stateful lives in the controller; the
 * canvas is redrawn from scratch on every change. */

const apiBase = (window as any).STEINERLAB_API ?? "http://127.0.0.1:8631";
const controller = new WorkbenchController(new ApiClient(apiBase));

const canvas = document.getElementById("board") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const panelEl = document.getElementById("panel")!;
const noticesEl = document.getElementById("notices")!;
const plotted: [number, number][] = [];

function redraw(): void {
  const state = controller.state;
  if (!state) {
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    ctx.fillStyle = "#666666";
    ctx.fillText("click to plot terminals, then press Start", 20, 30);
    for (const [x, y] of plotted) {
      ctx.beginPath();
      ctx.arc(x, y, 4, 0, 2 * Math.PI);
      ctx.fill();
    }
    return;
  }
  const view = fitView(state.terminals, canvas.width, canvas.height);
  drawScene(ctx, buildScene(state, controller.picks), view, canvas.width);
  const p = buildScene(state, controller.picks).panel;
  panelEl.innerHTML = [
    `<b>Lprim</b> ${p.lprim}`,
    `<b>lower bound</b> ${p.gpLower}`,
    `<b>Ltree</b> ${p.ltree}`,
    `<b>phase</b> ${state.phase}`,
    p.verdict,
  ].join("<br>");
  noticesEl.innerHTML = controller.notices
    .map(
      (n) =>
        `<div class="notice ${n.tone}" data-id="${n.id}">${n.text} <button>x</button></div>`,
    )
    .join("");
  for (const el of Array.from(noticesEl.querySelectorAll(".notice button"))) {
    el.addEventListener("click", (ev) => {
      const target = (ev.target as HTMLElement).parentElement!;
      controller.dismissNotice(Number(target.dataset.id));
    });
  }
  for (const btn of Array.from(document.querySelectorAll("button[data-mode]"))) {
    btn.classList.toggle("active", btn.getAttribute("data-mode") === controller.mode);
  }
  (document.querySelectorAll("button.action") as NodeListOf<HTMLButtonElement>).forEach(
    (b) => (b.disabled = controller.busy),
  );
}

controller.onChange(redraw);

canvas.addEventListener("click", (ev) => {
  const rect = canvas.getBoundingClientRect();
  const sx = ev.clientX - rect.left;
  const sy = ev.clientY - rect.top;
  if (!controller.state) {
    plotted.push([sx, sy]);
    redraw();
    return;
  }
  const view = fitView(controller.state.terminals, canvas.width, canvas.height);
  const hit = pickTerminal(controller.state.terminals, view, sx, sy);
  if (hit !== null) void controller.clickTerminal(hit);
});

document.getElementById("start")!.addEventListener("click", () => {
  if (plotted.length >= 2) {
    // screen y grows downward; flip so the session sees the math plane
    const pts = plotted.map(([x, y]) => [x, canvas.height - y] as [number, number]);
    void controller.start(pts);
  }
});

(document.getElementById("file") as HTMLInputElement).addEventListener("change", async (ev) => {
  const input = ev.target as HTMLInputElement;
  const file = input.files?.[0];
  if (file) void controller.startFromFile(await file.text());
});

for (const mode of ["stretch", "omit", "fermat", "polygonal"] as Mode[]) {
  document
    .getElementById(`mode-${mode}`)!
    .addEventListener("click", () => controller.setMode(mode));
}
document.getElementById("build")!.addEventListener("click", () => void controller.buildStretch());
document
  .getElementById("poly-commit")!
  .addEventListener("click", () => void controller.commitPolygonal());
document.getElementById("all")!.addEventListener("click", () => void controller.fullTreeAll());
document.getElementById("undo")!.addEventListener("click", () => void controller.undo());
document.getElementById("finish")!.addEventListener("click", () => void controller.finish());

redraw();
