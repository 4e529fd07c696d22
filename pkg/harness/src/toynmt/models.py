"""Sequence-to-sequence models: BiLSTM with attention and a Transformer.

Both expose the same surface: `forward(src, tgt_in)` returning logits over
the target vocabulary for teacher-forced training, and `greedy_decode(src)`
returning id sequences terminated by EOS.
"""

from __future__ import annotations

import math

import torch
import torch.nn as nn

from .data import BOS, EOS, PAD


class BiLSTMAttention(nn.Module):
    """Bidirectional LSTM encoder + LSTM decoder with global dot attention."""

    def __init__(self, src_vocab: int, tgt_vocab: int, hidden: int = 500,
                 layers: int = 2, dropout: float = 0.3):
        super().__init__()
        if hidden % 2:
            raise ValueError("hidden size must be even for the bidirectional encoder")
        self.hidden = hidden
        self.layers = layers
        self.src_emb = nn.Embedding(src_vocab, hidden, padding_idx=PAD)
        self.tgt_emb = nn.Embedding(tgt_vocab, hidden, padding_idx=PAD)
        self.encoder = nn.LSTM(hidden, hidden // 2, num_layers=layers, batch_first=True,
                               bidirectional=True, dropout=dropout if layers > 1 else 0.0)
        self.decoder = nn.LSTM(hidden, hidden, num_layers=layers, batch_first=True,
                               dropout=dropout if layers > 1 else 0.0)
        self.attn_out = nn.Linear(2 * hidden, hidden)
        self.dropout = nn.Dropout(dropout)
        self.generator = nn.Linear(hidden, tgt_vocab)

    def _merge_directions(self, state: torch.Tensor) -> torch.Tensor:
        # (layers*2, B, hidden/2) -> (layers, B, hidden)
        layers2, batch, half = state.shape
        state = state.view(self.layers, 2, batch, half)
        return torch.cat((state[:, 0], state[:, 1]), dim=-1).contiguous()

    def _encode(self, src: torch.Tensor):
        memory, (h, c) = self.encoder(self.dropout(self.src_emb(src)))
        return memory, (self._merge_directions(h), self._merge_directions(c))

    def _attend(self, dec_out: torch.Tensor, memory: torch.Tensor, src_mask: torch.Tensor):
        scores = torch.bmm(dec_out, memory.transpose(1, 2))
        scores = scores.masked_fill(src_mask.unsqueeze(1), float("-inf"))
        context = torch.bmm(torch.softmax(scores, dim=-1), memory)
        return torch.tanh(self.attn_out(torch.cat((dec_out, context), dim=-1)))

    def forward(self, src: torch.Tensor, tgt_in: torch.Tensor) -> torch.Tensor:
        memory, state = self._encode(src)
        dec_out, _ = self.decoder(self.dropout(self.tgt_emb(tgt_in)), state)
        fused = self._attend(dec_out, memory, src.eq(PAD))
        return self.generator(self.dropout(fused))

    @torch.no_grad()
    def greedy_decode(self, src: torch.Tensor, max_len: int) -> torch.Tensor:
        memory, state = self._encode(src)
        src_mask = src.eq(PAD)
        batch = src.size(0)
        tokens = torch.full((batch, 1), BOS, dtype=torch.long, device=src.device)
        finished = torch.zeros(batch, dtype=torch.bool, device=src.device)
        outputs = []
        for _ in range(max_len):
            dec_out, state = self.decoder(self.tgt_emb(tokens), state)
            fused = self._attend(dec_out, memory, src_mask)
            tokens = self.generator(fused).argmax(-1)
            tokens = tokens.masked_fill(finished.unsqueeze(1), PAD)
            outputs.append(tokens)
            finished |= tokens.squeeze(1).eq(EOS)
            if bool(finished.all()):
                break
        return torch.cat(outputs, dim=1)


class SinusoidalPositions(nn.Module):
    def __init__(self, dim: int, max_len: int = 512):
        super().__init__()
        position = torch.arange(max_len).unsqueeze(1)
        freq = torch.exp(torch.arange(0, dim, 2) * (-math.log(10000.0) / dim))
        table = torch.zeros(max_len, dim)
        table[:, 0::2] = torch.sin(position * freq)
        table[:, 1::2] = torch.cos(position * freq)
        self.register_buffer("table", table)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return x + self.table[: x.size(1)]


class TransformerSeq2Seq(nn.Module):
    def __init__(self, src_vocab: int, tgt_vocab: int, layers: int = 2, dim: int = 512,
                 heads: int = 8, ff: int = 2048, dropout: float = 0.1):
        super().__init__()
        self.dim = dim
        self.src_emb = nn.Embedding(src_vocab, dim, padding_idx=PAD)
        self.tgt_emb = nn.Embedding(tgt_vocab, dim, padding_idx=PAD)
        self.positions = SinusoidalPositions(dim)
        self.dropout = nn.Dropout(dropout)
        # pre-norm layers: trainable without long warmup
        self.transformer = nn.Transformer(
            d_model=dim, nhead=heads, num_encoder_layers=layers, num_decoder_layers=layers,
            dim_feedforward=ff, dropout=dropout, batch_first=True, norm_first=True,
        )
        self.generator = nn.Linear(dim, tgt_vocab)
        self._init_parameters()

    def _init_parameters(self):
        # glorot for projections; embeddings scaled so that after the
        # sqrt(dim) multiplier their inputs have unit variance (the torch
        # default N(0,1) would feed std=sqrt(dim) into the first layer norm)
        for name, p in self.named_parameters():
            if "emb" in name:
                nn.init.normal_(p, mean=0.0, std=self.dim**-0.5)
            elif p.dim() > 1:
                nn.init.xavier_uniform_(p)
        with torch.no_grad():
            self.src_emb.weight[PAD].zero_()
            self.tgt_emb.weight[PAD].zero_()

    def _embed(self, emb: nn.Embedding, ids: torch.Tensor) -> torch.Tensor:
        return self.dropout(self.positions(emb(ids) * math.sqrt(self.dim)))

    def forward(self, src: torch.Tensor, tgt_in: torch.Tensor) -> torch.Tensor:
        causal = nn.Transformer.generate_square_subsequent_mask(tgt_in.size(1), device=src.device)
        out = self.transformer(
            self._embed(self.src_emb, src),
            self._embed(self.tgt_emb, tgt_in),
            tgt_mask=causal,
            src_key_padding_mask=src.eq(PAD),
            memory_key_padding_mask=src.eq(PAD),
        )
        return self.generator(out)

    @torch.no_grad()
    def greedy_decode(self, src: torch.Tensor, max_len: int) -> torch.Tensor:
        src_pad = src.eq(PAD)
        memory = self.transformer.encoder(
            self._embed(self.src_emb, src), src_key_padding_mask=src_pad
        )
        batch = src.size(0)
        tokens = torch.full((batch, 1), BOS, dtype=torch.long, device=src.device)
        finished = torch.zeros(batch, dtype=torch.bool, device=src.device)
        for _ in range(max_len):
            causal = nn.Transformer.generate_square_subsequent_mask(
                tokens.size(1), device=src.device
            )
            out = self.transformer.decoder(
                self._embed(self.tgt_emb, tokens), memory,
                tgt_mask=causal, memory_key_padding_mask=src_pad,
            )
            step = self.generator(out[:, -1]).argmax(-1, keepdim=True)
            step = step.masked_fill(finished.unsqueeze(1), PAD)
            tokens = torch.cat((tokens, step), dim=1)
            finished |= step.squeeze(1).eq(EOS)
            if bool(finished.all()):
                break
        return tokens[:, 1:]


def build_model(name: str, src_vocab: int, tgt_vocab: int, hidden: int = 500,
                dropout: float | None = None) -> nn.Module:
    """bilstm | transformer_small | transformer_large.

    The large Transformer is the standard 6-layer 512/8-head/2048-FF
    configuration; the small one is a narrow 2-layer model sized for the toy
    vocabularies. `hidden` applies to the BiLSTM.
    """
    if name == "bilstm":
        return BiLSTMAttention(src_vocab, tgt_vocab, hidden=hidden, layers=2,
                               dropout=0.3 if dropout is None else dropout)
    if name == "transformer_small":
        return TransformerSeq2Seq(src_vocab, tgt_vocab, layers=2, dim=128, heads=4, ff=512,
                                  dropout=0.1 if dropout is None else dropout)
    if name == "transformer_large":
        return TransformerSeq2Seq(src_vocab, tgt_vocab, layers=6, dim=512, heads=8, ff=2048,
                                  dropout=0.1 if dropout is None else dropout)
    raise ValueError(f"unknown model {name!r}")
