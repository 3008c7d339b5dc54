import init, { Engine } from "./pkg/rmc_web.js";

const canvas = document.getElementById("view");
const ctx = canvas.getContext("2d");
const status = document.getElementById("status");
const GUTTER = 72;

await init();
const engine = new Engine(canvas.width - GUTTER, canvas.height - GUTTER);
let marks = [];

function run(kind, payload) {
  const events = JSON.parse(engine.command(kind, JSON.stringify(payload)));
  for (const e of events) {
    if (e.kind === "error") status.textContent = `${e.payload.code}: ${e.payload.message}`;
  }
  redraw();
  return events;
}

function path(m) {
  ctx.beginPath();
  switch (m.kind) {
    case "rect": ctx.rect(m.x, m.y, m.w, m.h); break;
    case "line": ctx.moveTo(m.x1, m.y1); ctx.lineTo(m.x2, m.y2); break;
    case "circle": ctx.arc(m.cx, m.cy, m.r, 0, 2 * Math.PI); break;
    case "polyline":
      m.points.forEach(([x, y], i) => (i ? ctx.lineTo(x, y) : ctx.moveTo(x, y)));
      if (m.closed) ctx.closePath();
      break;
    case "path":
      for (const sp of m.subpaths) sp.forEach(([x, y], i) => (i ? ctx.lineTo(x, y) : ctx.moveTo(x, y)));
      break;
  }
}

function draw(m) {
  const s = m.style;
  ctx.globalAlpha = s.opacity;
  if (m.kind === "text") {
    ctx.save();
    ctx.translate(m.x, m.y);
    if (m.angle) ctx.rotate((m.angle * Math.PI) / 180);
    ctx.font = `${s.font_size || 10}px sans-serif`;
    ctx.textAlign = m.anchor === "middle" ? "center" : m.anchor;
    ctx.textBaseline = "middle";
    ctx.fillStyle = s.fill || "#000";
    ctx.fillText(m.content, 0, 0);
    ctx.restore();
    return;
  }
  path(m);
  if (s.fill) { ctx.fillStyle = s.fill; ctx.fill(); }
  if (s.stroke) { ctx.strokeStyle = s.stroke; ctx.lineWidth = s.stroke_width; ctx.stroke(); }
}

function redraw() {
  marks = JSON.parse(engine.scene()).marks || [];
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  for (const m of marks) draw(m);
  ctx.globalAlpha = 1;
}

function point(ev) {
  const r = canvas.getBoundingClientRect();
  return [ev.clientX - r.left, ev.clientY - r.top];
}

// topmost mark with an edit handle under the pointer
function handleAt(x, y) {
  for (let i = marks.length - 1; i >= 0; i--) {
    const m = marks[i];
    if (!m.edit_handle) continue;
    path(m);
    if (ctx.isPointInPath(x, y) || ctx.isPointInStroke(x, y)) return m.edit_handle;
  }
  return null;
}

let drag = null;

canvas.addEventListener("mousedown", (ev) => {
  const [x, y] = point(ev);
  const h = handleAt(x, y);
  if (h) {
    const e = run("begin_edit", { object: h.object, attribute: h.attribute });
    if (e[0].kind === "ack") drag = { edit: h, x, y };
    return;
  }
  const cell = engine.cell_at(x, y);
  if (cell.length) drag = { from: cell, unit: ev.shiftKey };
});

canvas.addEventListener("mousemove", (ev) => {
  const [x, y] = point(ev);
  if (drag && drag.edit) {
    const d = drag.edit.axis.orientation === "horizontal" ? x - drag.x : y - drag.y;
    const e = run("preview_edit", { pixel_delta: d, snap: true });
    if (e[0].kind === "ack") status.textContent = `${drag.edit.attribute} = ${e[0].payload.value}`;
    return;
  }
  if (drag) return;
  const cell = engine.cell_at(x, y);
  if (cell.length !== 2 || cell[0] === cell[1]) return;
  const [r, c] = cell;
  status.textContent = `${r > c ? "adjacency" : "similarity"} cell ${r}, ${c}`;
});

canvas.addEventListener("mouseup", (ev) => {
  const [x, y] = point(ev);
  if (drag && drag.edit) {
    run("commit_edit", {});
  } else if (drag) {
    const to = engine.cell_at(x, y);
    if (to.length) {
      const [r0, r1] = [Math.min(drag.from[0], to[0]), Math.max(drag.from[0], to[0])];
      const [c0, c1] = [Math.min(drag.from[1], to[1]), Math.max(drag.from[1], to[1])];
      const e = run("create_rmc", { row0: r0, col0: c0, rows: r1 - r0 + 1, cols: c1 - c0 + 1, unit_grid: drag.unit });
      if (e[0].kind === "ack") status.textContent = `cell ${e[0].payload.id} opened`;
    }
  }
  drag = null;
});

canvas.addEventListener("wheel", (ev) => {
  const [x, y] = point(ev);
  const id = engine.rmc_at(x, y);
  if (!id) return;
  ev.preventDefault();
  run("scale_rmc", { id, factor: ev.deltaY < 0 ? 1.15 : 1 / 1.15 });
}, { passive: false });

canvas.addEventListener("dblclick", (ev) => {
  const id = engine.rmc_at(...point(ev));
  if (id) run("dismiss_rmc", { id });
});

document.getElementById("undo").onclick = () => run("undo", {});
document.getElementById("redo").onclick = () => run("redo", {});

redraw();
