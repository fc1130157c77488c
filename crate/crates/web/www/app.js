import init, { Playground } from "./pkg/annokit_web.js";

const canvas = document.getElementById("plot");
const ctx = canvas.getContext("2d");
const info = document.getElementById("info");
const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

let playground = null;
let points = [];
let picks = [];
let retrieved = [];
let query = null;
let view = { cx: 0, cy: 0, scale: 1 };

const palette = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"];

function fit() {
  const xs = points.map((p) => p.x), ys = points.map((p) => p.y);
  const [x0, x1, y0, y1] = [Math.min(...xs), Math.max(...xs), Math.min(...ys), Math.max(...ys)];
  view.cx = (x0 + x1) / 2;
  view.cy = (y0 + y1) / 2;
  view.scale = 0.9 * canvas.width / Math.max(x1 - x0, y1 - y0, 1e-9);
}

const toScreen = (x, y) => [canvas.width / 2 + (x - view.cx) * view.scale,
  canvas.height / 2 - (y - view.cy) * view.scale];
const toWorld = (sx, sy) => [view.cx + (sx - canvas.width / 2) / view.scale,
  view.cy - (sy - canvas.height / 2) / view.scale];

function draw() {
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  for (const p of points) {
    const [sx, sy] = toScreen(p.x, p.y);
    ctx.fillStyle = palette[p.cluster % palette.length] + "66";
    ctx.beginPath();
    ctx.arc(sx, sy, 2.5, 0, 2 * Math.PI);
    ctx.fill();
  }
  if (query) {
    const [qx, qy] = toScreen(query[0], query[1]);
    retrieved.forEach((r, rank) => {
      const p = points[r.index];
      const [sx, sy] = toScreen(p.x, p.y);
      ctx.strokeStyle = "#0008";
      ctx.lineWidth = 1 + 2 * (rank + 1) / retrieved.length;
      ctx.beginPath();
      ctx.moveTo(qx, qy);
      ctx.lineTo(sx, sy);
      ctx.stroke();
    });
    ctx.fillStyle = "#000";
    ctx.fillRect(qx - 4, qy - 4, 8, 8);
  }
  for (const pick of picks) {
    const p = points[pick.index];
    const [sx, sy] = toScreen(p.x, p.y);
    ctx.fillStyle = palette[p.cluster % palette.length];
    ctx.strokeStyle = "#000";
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    if (pick.stage === "graph_vote" || pick.stage === "seed") {
      ctx.rect(sx - 6, sy - 6, 12, 12);
    } else {
      ctx.arc(sx, sy, 6, 0, 2 * Math.PI);
    }
    ctx.fill();
    ctx.stroke();
  }
}

function report(lines, error = false) {
  info.className = error ? "error" : "";
  info.textContent = lines.join("\n");
}

function generate() {
  try {
    playground = new Playground(num("clusters"), num("per"), num("spread"), BigInt(num("seed")));
    points = JSON.parse(playground.points());
    picks = [];
    retrieved = [];
    query = null;
    fit();
    draw();
    report([`${points.length} points in ${num("clusters")} clusters`]);
  } catch (e) {
    report([String(e)], true);
  }
}

function select() {
  if (!playground) return;
  try {
    const t0 = performance.now();
    const v = JSON.parse(playground.select($("method").value, num("budget"), num("k"), BigInt(num("seed"))));
    const ms = performance.now() - t0;
    picks = v.picks;
    retrieved = [];
    query = null;
    draw();
    const m = v.metrics;
    report([
      `${v.method}: ${picks.length} picks in ${ms.toFixed(1)} ms`,
      `div_f ${m.div_f.toFixed(4)}`,
      `repr  ${m.repr.toFixed(4)}`,
      `clusters covered ${m.cluster_coverage.covered}/${m.cluster_coverage.total}`,
      "",
      "squares: graph-vote / seed picks",
      "circles: later picks",
    ]);
  } catch (e) {
    report([String(e)], true);
  }
}

canvas.addEventListener("click", (ev) => {
  if (!playground || picks.length === 0) return;
  const rect = canvas.getBoundingClientRect();
  query = toWorld(ev.clientX - rect.left, ev.clientY - rect.top);
  try {
    retrieved = JSON.parse(playground.retrieve(query[0], query[1], num("examples")));
    draw();
    report([
      `query (${query[0].toFixed(2)}, ${query[1].toFixed(2)})`,
      "prompt order (closest last):",
      ...retrieved.map((r) => `  #${r.index}  cos ${r.similarity.toFixed(4)}`),
    ]);
  } catch (e) {
    report([String(e)], true);
  }
});

$("generate").addEventListener("click", generate);
$("select").addEventListener("click", select);

await init();
generate();
select();
