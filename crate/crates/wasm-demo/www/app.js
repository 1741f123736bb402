// Single-page driver for the wasm demo: contour field + trajectory overlay,
// a convergence curve, and in-browser performance profiles.

import init, { demo_problems, field_grid, run_trajectory, mini_profile }
  from "./pkg/smcg_demo.js";

const GRID = 160;
const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

let problems = [];
let current = null;   // {name, view:[x0,x1,y0,y1], x0}
let start = null;     // [x, y]
let field = null;     // Float64Array of f values
let lastResult = null;

const $ = (id) => document.getElementById(id);

function pickProblem(name) {
  current = problems.find((p) => p.name === name);
  start = current.x0.slice();
  field = field_grid(current.name, ...current.view, GRID, GRID);
  drawField();
  rerun();
}

// log-compressed single-hue shading; darker = lower f
function drawField() {
  const canvas = $("field");
  const ctx = canvas.getContext("2d");
  const img = ctx.createImageData(GRID, GRID);
  let lo = Infinity, hi = -Infinity;
  for (const v of field) {
    if (Number.isFinite(v)) { lo = Math.min(lo, v); hi = Math.max(hi, v); }
  }
  const span = Math.log1p(hi - lo) || 1;
  for (let j = 0; j < GRID; j++) {
    for (let i = 0; i < GRID; i++) {
      const v = field[j * GRID + i];
      const t = Math.log1p(v - lo) / span;          // 0 at the minimum
      // canvas y grows downward; grid row 0 is y_lo
      const idx = 4 * ((GRID - 1 - j) * GRID + i);
      img.data[idx] = 18 + 90 * t;
      img.data[idx + 1] = 45 + 120 * t;
      img.data[idx + 2] = 90 + 150 * t;
      img.data[idx + 3] = 255;
    }
  }
  const off = new OffscreenCanvas(GRID, GRID);
  off.getContext("2d").putImageData(img, 0, 0);
  ctx.imageSmoothingEnabled = true;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.drawImage(off, 0, 0, canvas.width, canvas.height);
}

function toCanvas([x, y]) {
  const [x0, x1, y0, y1] = current.view;
  const c = $("field");
  return [
    ((x - x0) / (x1 - x0)) * c.width,
    (1 - (y - y0) / (y1 - y0)) * c.height,
  ];
}

function fromCanvas(px, py) {
  const [x0, x1, y0, y1] = current.view;
  const c = $("field");
  return [
    x0 + (px / c.width) * (x1 - x0),
    y0 + (1 - py / c.height) * (y1 - y0),
  ];
}

function drawTrajectory(path, steps) {
  drawField();
  const ctx = $("field").getContext("2d");
  ctx.lineWidth = 1.6;
  ctx.strokeStyle = "#ffd54a";
  ctx.beginPath();
  path.forEach((pt, i) => {
    const [px, py] = toCanvas(pt);
    if (i === 0) ctx.moveTo(px, py); else ctx.lineTo(px, py);
  });
  ctx.stroke();
  // mark restarts in red, start and end prominently
  steps.forEach((s, i) => {
    if (!s.restart) return;
    const [px, py] = toCanvas(path[i + 1]);
    ctx.fillStyle = "#ff5252";
    ctx.fillRect(px - 1.5, py - 1.5, 3, 3);
  });
  const [sx, sy] = toCanvas(path[0]);
  ctx.fillStyle = "#fff";
  ctx.beginPath(); ctx.arc(sx, sy, 4, 0, 7); ctx.fill();
  const [ex, ey] = toCanvas(path[path.length - 1]);
  ctx.fillStyle = "#00e676";
  ctx.beginPath(); ctx.arc(ex, ey, 4, 0, 7); ctx.fill();
}

function drawConvergence(steps) {
  const c = $("convergence");
  const ctx = c.getContext("2d");
  ctx.clearRect(0, 0, c.width, c.height);
  if (!steps.length) return;
  const fbest = Math.min(...steps.map((s) => s.f));
  const gaps = steps.map((s) => Math.max(s.f - fbest, 1e-16));
  const lo = Math.log10(Math.min(...gaps));
  const hi = Math.log10(Math.max(...gaps));
  const span = hi - lo || 1;
  ctx.strokeStyle = "#1f77b4";
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  gaps.forEach((g, i) => {
    const px = (i / Math.max(steps.length - 1, 1)) * (c.width - 20) + 10;
    const py = c.height - 12 - ((Math.log10(g) - lo) / span) * (c.height - 24);
    if (i === 0) ctx.moveTo(px, py); else ctx.lineTo(px, py);
  });
  ctx.stroke();
}

function rerun() {
  const out = JSON.parse(run_trajectory(
    current.name, $("scheme").value, $("tau").value,
    start[0], start[1], Number($("tol").value), 50000,
  ));
  if (out.error) {
    $("stats").textContent = out.error;
    return;
  }
  lastResult = out;
  drawTrajectory(out.path, out.steps);
  drawConvergence(out.steps);
  const restarts = out.steps.filter((s) => s.restart).length;
  $("stats").textContent =
    `status      ${out.status}\n` +
    `iterations  ${out.n_iter}\n` +
    `f evals     ${out.n_f}\n` +
    `g evals     ${out.n_g}\n` +
    `restarts    ${restarts}\n` +
    `f(x*)       ${out.f_final.toExponential(6)}\n` +
    `|g|_inf     ${out.gnorm_inf.toExponential(3)}\n` +
    `start       (${start[0].toFixed(3)}, ${start[1].toFixed(3)})`;
}

function drawProfiles(data) {
  const c = $("profile");
  const ctx = c.getContext("2d");
  ctx.clearRect(0, 0, c.width, c.height);
  const ml = 46, mr = 14, mt = 14, mb = 34;
  const pw = c.width - ml - mr, ph = c.height - mt - mb;
  const tauMax = Math.max(2, ...data.profiles.flatMap((p) => p.points.map((q) => q[0])));
  const lmax = Math.log2(tauMax);
  const X = (tau) => ml + (Math.log2(tau) / lmax) * pw;
  const Y = (rho) => mt + (1 - rho) * ph;

  ctx.strokeStyle = "#ccc";
  ctx.strokeRect(ml, mt, pw, ph);
  ctx.fillStyle = "#667";
  ctx.font = "11px system-ui";
  for (let i = 0; i <= 4; i++) {
    const rho = i / 4;
    ctx.fillText(rho.toFixed(2), 10, Y(rho) + 4);
  }
  for (let t = 1; t <= tauMax; t *= 2) {
    ctx.fillText(String(t), X(t) - 4, c.height - 16);
  }
  ctx.fillText("performance ratio τ (log₂)", ml + pw / 2 - 60, c.height - 2);

  data.profiles.forEach((p, pi) => {
    ctx.strokeStyle = PALETTE[pi % PALETTE.length];
    ctx.lineWidth = 2;
    ctx.beginPath();
    let prev = null;
    for (const [tau, rho] of p.points) {
      if (prev === null) ctx.moveTo(X(tau), Y(rho));
      else { ctx.lineTo(X(tau), Y(prev)); ctx.lineTo(X(tau), Y(rho)); }
      prev = rho;
    }
    ctx.lineTo(ml + pw, Y(prev ?? 0));
    ctx.stroke();
    ctx.fillStyle = PALETTE[pi % PALETTE.length];
    ctx.fillText(p.solver, ml + 10, mt + 16 + 16 * pi);
  });
}

async function main() {
  await init();
  problems = JSON.parse(demo_problems());
  const sel = $("problem");
  for (const p of problems) {
    const opt = document.createElement("option");
    opt.value = p.name;
    opt.textContent = p.name;
    sel.appendChild(opt);
  }
  $("loading").hidden = true;
  $("trajectory-panel").hidden = false;
  $("profile-panel").hidden = false;

  sel.addEventListener("change", () => pickProblem(sel.value));
  for (const id of ["scheme", "tau", "tol"]) {
    $(id).addEventListener("change", rerun);
  }
  $("rerun").addEventListener("click", rerun);
  $("field").addEventListener("click", (ev) => {
    const rect = ev.target.getBoundingClientRect();
    start = fromCanvas(ev.clientX - rect.left, ev.clientY - rect.top);
    rerun();
  });
  $("run-bench").addEventListener("click", () => {
    $("bench-status").textContent = "running 40 solves…";
    // let the status paint before the synchronous solve loop
    setTimeout(() => {
      const data = JSON.parse(mini_profile($("metric").value));
      const solved = data.solved.map((s) => `${s.solver} ${s.solved}/${data.problems}`).join(", ");
      $("bench-status").textContent = `solved: ${solved}`;
      drawProfiles(data);
    }, 30);
  });
  $("metric").addEventListener("change", () => $("run-bench").click());

  pickProblem(problems[0].name);
}

main();
