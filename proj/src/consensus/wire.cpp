// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#include "consensus/wire.hpp"

#include "core/errors.hpp"

namespace raptr {

namespace {

void encode_sig(Encoder& e, const PartialSignature& s) { e.u32(s.signer).u32(s.tag).bytes(s.bytes); }

PartialSignature decode_sig(Decoder& d) {
    PartialSignature s;
    s.signer = d.u32();
    s.tag = d.u32();
    s.bytes = d.bytes();
    return s;
}

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

std::vector<std::uint8_t> encode_message(const Message& m) {
    Encoder e;
    e.str("raptr-msg").u8(static_cast<std::uint8_t>(m.index()));
    std::visit(Overloaded{
                   [&](const BatchMsg& x) { x.batch->encode(e); },
                   [&](const PoaVoteMsg& x) {
                       e.u64(x.sn).digest(x.digest);
                       encode_sig(e, x.sig);
                   },
                   [&](const PoaMsg& x) { x.poa->encode(e); },
                   [&](const FetchRequestMsg& x) {
                       e.u32(static_cast<std::uint32_t>(x.batches.size()));
                       for (const auto& d : x.batches) e.digest(d);
                       e.u32(static_cast<std::uint32_t>(x.blocks.size()));
                       for (const auto& d : x.blocks) e.digest(d);
                   },
                   [&](const FetchResponseMsg& x) {
                       e.u32(static_cast<std::uint32_t>(x.batches.size()));
                       for (const auto& b : x.batches) b->encode(e);
                       e.u32(static_cast<std::uint32_t>(x.blocks.size()));
                       for (const auto& b : x.blocks) b->encode(e);
                   },
                   [&](const ProposeMsg& x) { x.block->encode(e); },
                   [&](const AdvanceRoundMsg& x) { x.reason.encode(e); },
                   [&](const QcVoteMsg& x) {
                       e.u64(x.round).u32(x.prefix).digest(x.block);
                       encode_sig(e, x.sig);
                   },
                   [&](const CcVoteMsg& x) {
                       x.qc->encode(e);
                       encode_sig(e, x.sig);
                   },
                   [&](const TcVoteMsg& x) {
                       e.u64(x.round);
                       x.reason.encode(e);
                       x.qc->encode(e);
                       encode_sig(e, x.sig);
                   },
               },
               m);
    return std::move(e).take();
}

Message decode_message(std::span<const std::uint8_t> bytes, std::uint32_t availability) {
    Decoder d(bytes);
    if (d.str() != "raptr-msg") throw DecodeError("bad message magic");
    const auto kind = d.u8();
    Message out;
    switch (kind) {
        case 0: out = BatchMsg{Batch::decode(d)}; break;
        case 1: {
            PoaVoteMsg x;
            x.sn = d.u64();
            x.digest = d.digest();
            x.sig = decode_sig(d);
            out = std::move(x);
            break;
        }
        case 2: out = PoaMsg{ProofOfAvailability::decode(d)}; break;
        case 3: {
            FetchRequestMsg x;
            x.batches.resize(d.count(32));
            for (auto& v : x.batches) v = d.digest();
            x.blocks.resize(d.count(32));
            for (auto& v : x.blocks) v = d.digest();
            out = std::move(x);
            break;
        }
        case 4: {
            FetchResponseMsg x;
            x.batches.resize(d.count(4));
            for (auto& v : x.batches) v = Batch::decode(d);
            x.blocks.resize(d.count(4));
            for (auto& v : x.blocks) v = Block::decode(d, availability);
            out = std::move(x);
            break;
        }
        case 5: out = ProposeMsg{Block::decode(d, availability)}; break;
        case 6: out = AdvanceRoundMsg{EntryReason::decode(d, availability)}; break;
        case 7: {
            QcVoteMsg x;
            x.round = d.u64();
            x.prefix = d.u32();
            x.block = d.digest();
            x.sig = decode_sig(d);
            out = std::move(x);
            break;
        }
        case 8: {
            CcVoteMsg x;
            x.qc = QuorumCertificate::decode(d, availability);
            x.sig = decode_sig(d);
            out = std::move(x);
            break;
        }
        case 9: {
            TcVoteMsg x;
            x.round = d.u64();
            x.reason = EntryReason::decode(d, availability);
            x.qc = QuorumCertificate::decode(d, availability);
            x.sig = decode_sig(d);
            out = std::move(x);
            break;
        }
        default: throw DecodeError("unknown message kind");
    }
    d.expect_done();
    return out;
}

}  // namespace raptr
