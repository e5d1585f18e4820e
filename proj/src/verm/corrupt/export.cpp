#include "verm/corrupt/export.hpp"

#include <fstream>

#include "verm/core/errors.hpp"
#include "verm/core/log.hpp"
#include "verm/render/codec.hpp"
#include "verm/render/render.hpp"

namespace verm {

Json to_json(const SftRecord& r) {
  return Json{{"id", r.id},
              {"task", std::string(to_string(r.task))},
              {"gt_png", r.gt_png},
              {"pred_png", r.pred_png},
              {"annotation", to_json(r.annotation)},
              {"provenance", std::string(to_string(r.provenance))},
              {"seed", r.seed}};
}

SftRecord sft_record_from_json(const Json& j) {
  if (!j.is_object()) throw DataError("sft record: expected an object");
  SftRecord r;
  try {
    r.id = j.at("id").get<std::string>();
    r.task = task_from_string(j.at("task").get<std::string>());
    r.gt_png = j.at("gt_png").get<std::string>();
    r.pred_png = j.at("pred_png").get<std::string>();
    r.annotation = report_from_json(j.at("annotation"));
    r.provenance = provenance_from_string(j.at("provenance").get<std::string>());
    r.seed = j.at("seed").get<std::uint64_t>();
  } catch (const Json::exception& e) {
    throw DataError(std::string("sft record: ") + e.what());
  }
  return r;
}

std::size_t export_sft_records(std::span<const PairInstance> instances, const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir / "images", ec);
  if (ec) throw DataError("cannot create " + (out_dir / "images").string() + ": " + ec.message());
  std::ofstream out(out_dir / "sft.jsonl", std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open " + (out_dir / "sft.jsonl").string() + " for writing");

  std::size_t written = 0;
  for (const auto& inst : instances) {
    const RenderResult gt = render(inst.gt_doc);
    const RenderResult pred = render(inst.pred_doc);
    if (!gt.success() || !pred.success()) {
      log_warning("skipping " + inst.id + ": " + (gt.success() ? "pred" : "gt") +
                  " render failed: " + (gt.success() ? pred.diagnostic() : gt.diagnostic()));
      continue;
    }
    SftRecord rec{inst.id,
                  inst.task,
                  "images/" + inst.id + "_gt.png",
                  "images/" + inst.id + "_pred.png",
                  inst.gt_report,
                  inst.provenance,
                  inst.seed};
    write_png(out_dir / rec.gt_png, gt.image());
    write_png(out_dir / rec.pred_png, pred.image());
    out << canonical_dump(to_json(rec)) << '\n';
    if (!out) throw DataError("write failed on " + (out_dir / "sft.jsonl").string());
    ++written;
  }
  return written;
}

}  // namespace verm
