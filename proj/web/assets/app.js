// Minimal schema-driven client for the gateway: GET /ui/schema builds the
// form, POST /ui/submit renders the returned display items.
"use strict";

const $ = (id) => document.getElementById(id);
const readers = {};

function el(tag, attrs = {}, ...children) {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  for (const c of children) node.append(c);
  return node;
}

function fileToUpload(file) {
  return new Promise((resolve, reject) => {
    const r = new FileReader();
    r.onload = () => resolve({ filename: file.name, content_base64: r.result.split(",")[1] || "" });
    r.onerror = () => reject(r.error);
    r.readAsDataURL(file);
  });
}

function control(field) {
  const t = field.type;
  const id = `in-${field.name}`;
  const box = el("fieldset", {}, el("legend", {}, field.label));
  let input;
  switch (t) {
    case "Text":
      input = el("input", { id, type: "text" });
      readers[field.name] = () => input.value;
      break;
    case "TextLong":
      input = el("textarea", { id, rows: 5, cols: 60 });
      readers[field.name] = () => input.value;
      break;
    case "Number":
      input = el("input", { id, type: "number", step: field.integer_only ? "1" : "any" });
      if (field.min != null) input.min = field.min;
      if (field.max != null) input.max = field.max;
      readers[field.name] = () => Number(input.value);
      break;
    case "Range":
      input = el("input", { id, type: "range", min: field.min, max: field.max, step: field.step });
      readers[field.name] = () => Number(input.value);
      break;
    case "SingleChoice":
    case "MultipleChoice": {
      input = el("div", { id });
      const kind = t === "SingleChoice" ? "radio" : "checkbox";
      field.options.forEach((opt, i) => {
        const b = el("input", { type: kind, name: id, value: opt, id: `${id}-${i}` });
        input.append(el("label", { for: `${id}-${i}` }, b, ` ${opt} `));
      });
      readers[field.name] = () => {
        const picked = [...input.querySelectorAll("input:checked")].map((b) => b.value);
        return kind === "radio" ? picked[0] : picked;
      };
      break;
    }
    case "File":
    case "ImageFile":
    case "CSVFile":
    case "TimeSeriesCSVFile": {
      input = el("input", { id, type: "file" });
      const ext = t === "ImageFile" ? [".png", ".pgm"] : t === "File" ? field.extensions : [".csv"];
      if (ext) input.accept = ext.join(",");
      readers[field.name] = () => (input.files[0] ? fileToUpload(input.files[0]) : undefined);
      break;
    }
    default:
      throw new Error(`unknown input type ${t}`);
  }
  box.append(input, el("div", { class: "issue", id: `issue-${field.name}` }));
  return box;
}

function linePlot(item) {
  const W = 900, H = 320, P = 40;
  const all = item.series.flatMap((s) => s.y);
  const lo = Math.min(...all), hi = Math.max(...all);
  const xs = [...new Set(item.series.flatMap((s) => s.x.map(String)))].sort();
  const px = (x) => P + (xs.indexOf(String(x)) / Math.max(1, xs.length - 1)) * (W - 2 * P);
  const py = (y) => H - P - ((y - lo) / (hi - lo || 1)) * (H - 2 * P);
  const colors = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd"];
  let svg = `<svg xmlns="http://www.w3.org/2000/svg" width="${W}" height="${H}">`;
  svg += `<text x="${P}" y="20">${item.title}</text><text x="4" y="${P}">${hi.toFixed(2)}</text><text x="4" y="${H - P}">${lo.toFixed(2)}</text>`;
  item.series.forEach((s, i) => {
    const pts = s.x.map((x, j) => `${px(x)},${py(s.y[j])}`).join(" ");
    const c = colors[i % colors.length];
    svg += `<polyline fill="none" stroke="${c}" stroke-width="1.5" points="${pts}"><title>${s.label}</title></polyline>`;
    svg += `<text x="${W - 150}" y="${30 + 16 * i}" fill="${c}">${s.label}</text>`;
  });
  const box = el("div", { class: "output" });
  box.innerHTML = svg + "</svg>";
  return box;
}

function imagePlot(item) {
  const [h, w, c = 1] = item.image.shape;
  const bytes = Uint8Array.from(atob(item.image.data), (ch) => ch.charCodeAt(0));
  const canvas = el("canvas", { width: w, height: h });
  const scale = Math.max(1, Math.floor(512 / Math.max(w, h)));
  canvas.style.width = `${w * scale}px`;
  const ctx = canvas.getContext("2d");
  const img = ctx.createImageData(w, h);
  for (let i = 0; i < w * h; i++) {
    for (let k = 0; k < 3; k++) img.data[4 * i + k] = bytes[i * c + (c === 3 ? k : 0)];
    img.data[4 * i + 3] = 255;
  }
  ctx.putImageData(img, 0, 0);
  return el("div", { class: "output" }, el("div", {}, item.title), canvas);
}

function render(item) {
  switch (item.type) {
    case "PlotLine": return linePlot(item);
    case "PlotImage": return imagePlot(item);
    case "NumberDisplay": return el("div", { class: "output" }, el("strong", {}, `${item.label}: `), String(item.value));
    case "TextDisplay": return el("div", { class: "output" }, el("strong", {}, `${item.label}: `), item.text);
    case "FileDownload": {
      const a = el("a", { href: `data:${item.mime};base64,${item.content_base64}`, download: item.filename }, item.filename);
      return el("div", { class: "output" }, "Download ", a);
    }
    default: return el("div", { class: "output" }, `unsupported output ${item.type}`);
  }
}

async function submit(schema) {
  $("error").textContent = "";
  $("outputs").replaceChildren();
  document.querySelectorAll(".issue").forEach((n) => (n.textContent = ""));
  const body = {};
  for (const f of schema.inputs) {
    const v = await readers[f.name]();
    if (v === undefined || v === "") {
      $(`issue-${f.name}`).textContent = "required";
      return;
    }
    body[f.name] = v;
  }
  $("submit").disabled = true;
  $("busy").hidden = false;
  try {
    const res = await fetch("ui/submit", { method: "POST", headers: { "Content-Type": "application/json" }, body: JSON.stringify(body) });
    const reply = await res.json();
    if (!res.ok) {
      const issues = reply.error.detail && reply.error.detail.issues;
      if (issues) issues.forEach((i) => { const n = $(`issue-${i.field_name}`); if (n) n.textContent = i.message; });
      $("error").textContent = `${reply.error.code}: ${reply.error.message}`;
      return;
    }
    reply.outputs.forEach((item) => $("outputs").append(render(item)));
  } catch (e) {
    $("error").textContent = String(e);
  } finally {
    $("submit").disabled = false;
    $("busy").hidden = true;
  }
}

async function main() {
  try {
    const schema = await (await fetch("ui/schema")).json();
    $("title").textContent = schema.app_name;
    $("description").textContent = schema.description;
    schema.inputs.forEach((f) => $("form").append(control(f)));
    $("submit").onclick = () => submit(schema);
  } catch (e) {
    $("error").textContent = `cannot load schema: ${e}`;
    $("submit").hidden = true;
  }
}

main();
