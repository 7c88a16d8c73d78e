import init, { generatePoints, labels, separate, greedy, localSearchDisks } from "./pkg/vsep_web.js";

const $ = (id) => document.getElementById(id);
const canvas = $("view");
const ctx = canvas.getContext("2d");
const COLORS = { 1: "#1f77b4", 2: "#d62728" };
const state = { coords: null, labels: null };

function status(text) {
  $("status").textContent = text;
}

function int(id) {
  return Math.max(0, Math.floor(Number($(id).value)));
}

// Maps a box [lo, lo + span]^2 onto the canvas with a margin.
function viewport(lo, span) {
  const m = 20;
  const s = (canvas.width - 2 * m) / span;
  return {
    x: (x) => m + (x - lo) * s,
    y: (y) => canvas.height - m - (y - lo) * s,
    r: (r) => r * s,
  };
}

function clear() {
  ctx.fillStyle = "white";
  ctx.fillRect(0, 0, canvas.width, canvas.height);
}

function dot(v, x, y, r, color) {
  ctx.fillStyle = color;
  ctx.beginPath();
  ctx.arc(v.x(x), v.y(y), r, 0, 2 * Math.PI);
  ctx.fill();
}

function square(v, x, y, h, color) {
  ctx.fillStyle = color;
  ctx.fillRect(v.x(x) - h, v.y(y) - h, 2 * h, 2 * h);
}

function drawPoints(v, colorOf) {
  const c = state.coords;
  for (let i = 0; i < c.length / 2; i++) dot(v, c[2 * i], c[2 * i + 1], 3, colorOf(i));
}

function drawGuards(v, g) {
  for (let i = 0; i < g.length; i += 2) square(v, g[i], g[i + 1], 2, "black");
}

function timed(f) {
  const t = performance.now();
  const out = f();
  return [out, performance.now() - t];
}

function onGenerate() {
  state.coords = generatePoints($("kind").value, int("n"), int("seed"));
  state.labels = labels(state.coords, $("labels").value, int("seed"));
  const v = viewport(0, 1);
  clear();
  drawPoints(v, (i) => COLORS[state.labels[i]]);
  status(`${state.coords.length / 2} points generated.`);
}

function onSeparate() {
  if (!state.coords) onGenerate();
  const [res, ms] = timed(() => JSON.parse(separate(state.coords, int("seed"))));
  const inside = new Set(res.inside);
  const v = viewport(0, 1);
  clear();
  ctx.strokeStyle = "seagreen";
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  ctx.arc(v.x(res.center[0]), v.y(res.center[1]), v.r(res.radius), 0, 2 * Math.PI);
  ctx.stroke();
  drawPoints(v, (i) => (inside.has(i) ? "#2ca02c" : "#9467bd"));
  drawGuards(v, res.guards);
  status(
    `Sphere separator: ${res.guards.length / 2} guards, ` +
      `${res.inside.length} inside / ${res.outside.length} outside, ` +
      `${res.retries} retries, ${ms.toFixed(0)} ms.`
  );
}

function onGreedy() {
  if (!state.coords) onGenerate();
  const [res, ms] = timed(() => JSON.parse(greedy(state.coords, state.labels)));
  const v = viewport(0, 1);
  clear();
  drawPoints(v, (i) => COLORS[state.labels[i]]);
  drawGuards(v, res.guards);
  status(
    `Greedy separator: ${res.guards.length / 2} guards in ${res.rounds} rounds ` +
      `(lower bound ${res.lower_bound}), verified: ${res.separated}, ${ms.toFixed(0)} ms.`
  );
}

// Seeded generator for the disk families.
function mulberry32(a) {
  return () => {
    a |= 0;
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function onLocalSearch() {
  const rand = mulberry32(int("seed"));
  const disks = [];
  for (let i = 0; i < int("disks"); i++) disks.push(10 * rand(), 10 * rand(), 1 + 2 * rand());
  const [res, ms] = timed(() => JSON.parse(localSearchDisks(Float64Array.from(disks), int("ell"))));
  const v = viewport(-3, 16);
  clear();
  ctx.strokeStyle = "rgba(31, 119, 180, 0.6)";
  ctx.lineWidth = 1;
  for (let i = 0; i < disks.length; i += 3) {
    ctx.beginPath();
    ctx.arc(v.x(disks[i]), v.y(disks[i + 1]), v.r(disks[i + 2]), 0, 2 * Math.PI);
    ctx.stroke();
  }
  for (let i = 0; i < res.greedy.length; i += 2) dot(v, res.greedy[i], res.greedy[i + 1], 2.5, "#bbbbbb");
  drawGuards(v, res.points);
  for (let i = 0; i < res.points.length; i += 2) square(v, res.points[i], res.points[i + 1], 4, "black");
  status(
    `Greedy ${res.greedy.length / 2} points (gray), local search ${res.points.length / 2} (black).\n` +
      `Sizes: ${res.size_history.join(" > ")}; lower bound ${res.lower_bound}; valid: ${res.valid}; ${ms.toFixed(0)} ms.`
  );
}

function guard(f) {
  return () => {
    try {
      f();
    } catch (e) {
      status(`Error: ${e.message ?? e}`);
    }
  };
}

await init();
$("generate").onclick = guard(onGenerate);
$("separate").onclick = guard(onSeparate);
$("greedy").onclick = guard(onGreedy);
$("localsearch").onclick = guard(onLocalSearch);
guard(onGenerate)();
