import init, { normalize, similarity, explore_filter } from "./pkg/paradecay_web.js";

const $ = (id) => document.getElementById(id);

function show(el, fn) {
  try {
    el.classList.remove("err");
    fn();
  } catch (e) {
    el.classList.add("err");
    el.textContent = String(e.message ?? e);
  }
}

function runNormalize() {
  const out = $("n-out");
  show(out, () => {
    const r = JSON.parse(normalize($("n-text").value, $("n-seeds").value, $("n-emoji").checked,
      $("n-user").value, $("n-url").value));
    out.textContent = `${r.text}\n(${r.emoji_in_input} emoji in input)`;
  });
}

function runSimilarity() {
  $("s-out").textContent = similarity($("s-a").value, $("s-b").value).toFixed(4);
}

function runFilter() {
  const copy = parseFloat($("f-copy").value);
  const dedup = parseFloat($("f-dedup").value);
  $("f-copy-v").textContent = copy.toFixed(2);
  $("f-dedup-v").textContent = dedup.toFixed(2);
  const sum = $("f-sum");
  const body = $("f-rows");
  body.replaceChildren();
  show(sum, () => {
    const r = JSON.parse(explore_filter($("f-orig").value, $("f-cands").value, copy, dedup));
    sum.textContent = `kept ${r.kept}; dropped ${r.dropped_copy} copies, ` +
      `${r.dropped_zero_overlap} without overlap, ${r.dropped_near_duplicate} near duplicates`;
    r.rows.forEach((row, i) => {
      const tr = document.createElement("tr");
      if (!row.kept) tr.className = "drop";
      for (const [v, cls] of [[i + 1, "num"], [row.text, ""], [row.similarity.toFixed(3), "num"],
        [row.kept ? "kept" : row.reason.replace("_", " "), ""]]) {
        const td = document.createElement("td");
        td.textContent = v;
        if (cls) td.className = cls;
        tr.append(td);
      }
      body.append(tr);
    });
  });
}

await init();
for (const id of ["n-text", "n-seeds", "n-emoji", "n-user", "n-url"]) $(id).addEventListener("input", runNormalize);
for (const id of ["s-a", "s-b"]) $(id).addEventListener("input", runSimilarity);
for (const id of ["f-orig", "f-cands", "f-copy", "f-dedup"]) $(id).addEventListener("input", runFilter);
runNormalize();
runSimilarity();
runFilter();
