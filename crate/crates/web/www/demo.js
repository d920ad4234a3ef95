import init, { generate, analyze, count } from "./pkg/acyclic_backdoors_web.js";

const $ = (id) => document.getElementById(id);
const canvas = $("view");
const ctx = canvas.getContext("2d");
let scene = null;

function show(text, isError = false) {
  $("out").textContent = text;
  $("out").className = isError ? "error" : "";
}

const key = (n) => `${n.kind}:${n.id}`;

// Spring embedding seeded on a circle so the picture is reproducible.
function layout(a) {
  const nodes = [
    ...a.vars.map((id) => ({ kind: "var", id })),
    ...a.clauses.map((_, id) => ({ kind: "clause", id })),
  ];
  const index = new Map(nodes.map((n, i) => [key(n), i]));
  const edges = a.edges.map((e) => [index.get(`var:${e.var}`), index.get(`clause:${e.clause}`), e.positive]);
  const pos = nodes.map((_, i) => {
    const t = (2 * Math.PI * i) / nodes.length;
    return [Math.cos(t), Math.sin(t)];
  });
  const ideal = 1.8 / Math.sqrt(nodes.length);
  for (let step = 0; step < 300; step++) {
    const force = pos.map(() => [0, 0]);
    for (let i = 0; i < nodes.length; i++) {
      for (let j = i + 1; j < nodes.length; j++) {
        const dx = pos[i][0] - pos[j][0], dy = pos[i][1] - pos[j][1];
        const d2 = Math.max(dx * dx + dy * dy, 1e-4);
        const f = (ideal * ideal) / d2;
        force[i][0] += dx * f; force[i][1] += dy * f;
        force[j][0] -= dx * f; force[j][1] -= dy * f;
      }
    }
    for (const [u, v] of edges) {
      const dx = pos[u][0] - pos[v][0], dy = pos[u][1] - pos[v][1];
      const d = Math.hypot(dx, dy) || 1e-3;
      const f = d / ideal;
      force[u][0] -= dx * f; force[u][1] -= dy * f;
      force[v][0] += dx * f; force[v][1] += dy * f;
    }
    const cool = 0.05 * (1 - step / 300);
    pos.forEach((p, i) => {
      const len = Math.hypot(force[i][0], force[i][1]) || 1;
      const m = Math.min(len, 1) * cool;
      p[0] += (force[i][0] / len) * m;
      p[1] += (force[i][1] / len) * m;
    });
  }
  return { nodes, index, edges, pos, analysis: a };
}

function cycleEdges(cycle, index) {
  const set = new Set();
  if (!cycle) return set;
  cycle.forEach((n, i) => {
    const a = index.get(key(n)), b = index.get(key(cycle[(i + 1) % cycle.length]));
    set.add(`${Math.min(a, b)}-${Math.max(a, b)}`);
  });
  return set;
}

function draw() {
  const w = (canvas.width = canvas.clientWidth * devicePixelRatio);
  const h = (canvas.height = canvas.clientHeight * devicePixelRatio);
  ctx.clearRect(0, 0, w, h);
  if (!scene) return;
  const { nodes, index, edges, pos, analysis: a } = scene;
  const xs = pos.map((p) => p[0]), ys = pos.map((p) => p[1]);
  const [x0, x1, y0, y1] = [Math.min(...xs), Math.max(...xs), Math.min(...ys), Math.max(...ys)];
  const pad = 30 * devicePixelRatio;
  const s = Math.min((w - 2 * pad) / (x1 - x0 || 1), (h - 2 * pad) / (y1 - y0 || 1));
  const at = (i) => [pad + (pos[i][0] - x0) * s, pad + (pos[i][1] - y0) * s];
  const backdoor = new Set(a.backdoor ?? []);
  const satisfied = new Set(a.satisfied_clauses);
  const cycle = cycleEdges(a.residual_cycle ?? a.cycle, index);
  const faded = (i) => nodes[i].kind === "clause" && satisfied.has(nodes[i].id);

  for (const [u, v, positive] of edges) {
    const [ax, ay] = at(u), [bx, by] = at(v);
    const onCycle = cycle.has(`${Math.min(u, v)}-${Math.max(u, v)}`);
    ctx.globalAlpha = faded(v) ? 0.15 : 1;
    ctx.strokeStyle = onCycle ? "#f90" : positive ? "#3a3" : "#93c";
    ctx.lineWidth = (onCycle ? 4 : 1.5) * devicePixelRatio;
    ctx.beginPath(); ctx.moveTo(ax, ay); ctx.lineTo(bx, by); ctx.stroke();
  }
  const r = 9 * devicePixelRatio;
  ctx.font = `${10 * devicePixelRatio}px sans-serif`;
  ctx.textAlign = "center"; ctx.textBaseline = "middle";
  nodes.forEach((n, i) => {
    const [x, y] = at(i);
    ctx.globalAlpha = faded(i) ? 0.25 : 1;
    ctx.fillStyle = n.kind === "clause" ? "#999" : backdoor.has(n.id) ? "#d33" : "#36c";
    ctx.beginPath();
    if (n.kind === "clause") ctx.rect(x - r * 0.8, y - r * 0.8, r * 1.6, r * 1.6);
    else ctx.arc(x, y, r, 0, 2 * Math.PI);
    ctx.fill();
    ctx.fillStyle = "#fff";
    ctx.fillText(n.kind === "clause" ? `C${n.id}` : `${n.id}`, x, y);
  });
  ctx.globalAlpha = 1;
}

function run(kind, k) {
  const a = JSON.parse(analyze($("cnf").value, kind, k));
  scene = layout(a);
  draw();
  return a;
}

function describe(a, kind, k) {
  const lines = [`${a.vars.length} variables, ${a.clauses.length} clauses`];
  lines.push(a.cycle ? `shortest cycle has ${a.cycle.length / 2} clauses` : "formula is acyclic");
  if (!a.found) {
    lines.push(`no ${kind} backdoor set of size at most ${k}`);
  } else {
    lines.push(`${kind} backdoor set: {${a.backdoor.join(", ")}}`);
    if (a.witness) {
      const tau = Object.entries(a.witness).map(([v, b]) => `${v}=${b ? 1 : 0}`);
      lines.push(`witness: ${tau.join(" ")}`);
    }
    if (kind !== "strong") lines.push(a.residual_cycle ? "reduced formula still cyclic" : "reduced formula is acyclic");
  }
  return lines.join("\n");
}

function guarded(action) {
  return () => {
    try { action(); } catch (e) { show(e.message ?? String(e), true); }
  };
}

$("gen").onclick = guarded(() => {
  $("cnf").value = generate($("gen-kind").value, +$("gen-size").value, +$("gen-seed").value);
  const a = run("deletion", 0);
  show(`${a.vars.length} variables, ${a.clauses.length} clauses`);
});
$("detect").onclick = guarded(() => {
  const kind = $("kind").value, k = +$("k").value;
  show(describe(run(kind, k), kind, k));
});
$("count").onclick = guarded(() => {
  const c = JSON.parse(count($("cnf").value));
  show(`${c.count} models over ${c.universe_size} variables\nstrong backdoor used: {${c.backdoor.join(", ")}}`);
});
window.onresize = draw;

await init();
$("gen").onclick();
