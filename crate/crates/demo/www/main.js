import init, { segment_tree, analyze, reduce } from "./pkg/ijoin_demo.js";

const $ = (id) => document.getElementById(id);
const SVG = "http://www.w3.org/2000/svg";

function el(tag, attrs = {}, text) {
  const e = document.createElementNS(SVG, tag);
  for (const [k, v] of Object.entries(attrs)) e.setAttribute(k, v);
  if (text !== undefined) e.textContent = text;
  return e;
}

function call(fn, errorId, ...args) {
  $(errorId).textContent = "";
  try {
    return JSON.parse(fn(...args));
  } catch (e) {
    $(errorId).textContent = String(e);
    return null;
  }
}

let view = null;
let selected = -1;

function drawTree() {
  const svg = $("tree");
  svg.replaceChildren();
  if (!view) return;
  const w = 960, top = 20, gap = Math.min(48, 280 / Math.max(view.height, 1));
  const pos = (n) => ({ x: ((n.index + 0.5) / 2 ** n.depth) * w, y: top + n.depth * gap });
  const byName = new Map(view.nodes.map((n) => [n.node, n]));
  const partition = new Set(selected >= 0 ? view.intervals[selected].partition : []);
  const path = new Set(view.stab ? view.stab.path : []);
  for (const n of view.nodes) {
    if (n.depth === 0) continue;
    const p = pos(n), q = pos(byName.get(n.node.slice(0, -1)));
    svg.append(el("line", { x1: q.x, y1: q.y, x2: p.x, y2: p.y, stroke: "#ccc" }));
  }
  const r = Math.max(3, Math.min(9, w / 2 ** (view.height + 2)));
  for (const n of view.nodes) {
    const p = pos(n);
    const cls = ["node"];
    if (n.subset.length) cls.push("occupied");
    if (partition.has(n.node)) cls.push("partition");
    if (path.has(n.node)) cls.push("path");
    const c = el("circle", { cx: p.x, cy: p.y, r, class: cls.join(" ") });
    const members = n.subset.map((i) => view.intervals[i].interval).join(" ");
    c.append(el("title", {}, `${n.node || "ε"}  ${n.segment}${members ? "\n" + members : ""}`));
    svg.append(c);
    if (view.height <= 4) svg.append(el("text", { x: p.x, y: p.y + r + 10 }, n.node || "ε"));
  }
}

function showIntervals() {
  const box = $("tree-intervals");
  box.replaceChildren();
  const hits = new Set(view && view.stab ? view.stab.hits : []);
  (view ? view.intervals : []).forEach((x, i) => {
    const s = document.createElement("span");
    s.textContent = x.interval;
    s.title = "partition: " + x.partition.map((b) => b || "ε").join(", ");
    if (i === selected) s.classList.add("selected");
    if (hits.has(i)) s.classList.add("hit");
    s.onclick = () => {
      selected = selected === i ? -1 : i;
      showIntervals();
      drawTree();
    };
    box.append(s);
  });
  const info = $("tree-info");
  if (!view) return (info.textContent = "");
  const parts = [`height ${view.height}`];
  if (selected >= 0) parts.push(`partition of ${view.intervals[selected].interval}: ${view.intervals[selected].partition.map((b) => b || "ε").join(", ")}`);
  if (view.stab) parts.push(`stab ${view.stab.point}: leaf ${view.stab.leaf}, ${view.stab.hits.length} hit(s)`);
  info.textContent = parts.join(" · ");
}

function build() {
  view = call(segment_tree, "tree-error", $("intervals").value, $("point").value);
  selected = -1;
  showIntervals();
  drawTree();
}

function flag(b) {
  if (b === null || b === undefined) return "<span>n/a</span>";
  return b ? '<span class="yes">yes</span>' : '<span class="no">no</span>';
}

function escape(s) {
  return String(s).replace(/[&<>]/g, (c) => ({ "&": "&amp;", "<": "&lt;", ">": "&gt;" })[c]);
}

function runAnalysis() {
  const a = call(analyze, "analysis-error", $("query").value);
  if (!a) return ($("analysis").innerHTML = "");
  const rows = [
    ["query", escape(a.query)],
    ["alpha-acyclic", flag(a.alpha)],
    ["gamma-acyclic", flag(a.gamma)],
    ["iota-acyclic", flag(a.iota)],
    ["Berge-acyclic", flag(a.berge)],
    ["Berge cycle (length 3+)", escape(a.berge_cycle ?? "none")],
    ["reduced queries", a.tau],
    ["variants per relation", a.variants.map(([e, n]) => `${escape(e)}: ${n}`).join(", ")],
    ["after simplification", a.simplified ?? "too many to enumerate"],
    ["width per class", a.class_widths ? a.class_widths.join(", ") : "n/a"],
    ["ij-width (fhtw upper bound)", a.ijw_fhtw_upper ?? "n/a"],
  ];
  $("analysis").innerHTML = "<table>" + rows.map(([k, v]) => `<tr><th>${k}</th><td>${v}</td></tr>`).join("") + "</table>";
}

function runReduction() {
  const p = call(reduce, "reduce-error", $("reduce-query").value, 3);
  if (!p) return ($("reduction").innerHTML = "");
  const head = `<p>${p.members} equality-join queries in ${p.groups.length} simplified shape(s).</p>`;
  const rows = p.groups
    .map(
      (g) =>
        `<tr><td>${escape(g.shape)}</td><td>${g.variants}</td><td>${flag(g.alpha)}</td><td>${g.fhtw ?? "n/a"}</td>` +
        `<td>${g.members.map(escape).join("<br>")}${g.variants > g.members.length ? "<br>…" : ""}</td></tr>`,
    )
    .join("");
  $("reduction").innerHTML =
    head + `<table><tr><th>shape</th><th>members</th><th>acyclic</th><th>fhtw</th><th>examples</th></tr>${rows}</table>`;
}

await init();
$("build").onclick = build;
$("analyze").onclick = runAnalysis;
$("reduce").onclick = runReduction;
build();
runAnalysis();
runReduction();
