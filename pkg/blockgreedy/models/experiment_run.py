"""Stored experiment runs."""

from sqlalchemy import Column, DateTime, Float, Index, Integer, String, Text, func

from .base import Base


class ExperimentRun(Base):
    """One aggregated RunReport with its JSON body."""

    __tablename__ = "experiment_runs"

    id = Column(Integer, primary_key=True, autoincrement=True)
    instance = Column(String(255), nullable=False)
    algorithm = Column(String(50), nullable=False)
    eps = Column(Float, nullable=False)
    seed = Column(Integer, nullable=False)
    reps = Column(Integer, nullable=False)
    mean_value = Column(Float, nullable=False)
    stderr_value = Column(Float, nullable=False)
    mean_rounds = Column(Float, nullable=False)
    opt = Column(Float, nullable=True)
    ratio = Column(Float, nullable=True)
    report_json = Column(Text, nullable=False)
    created_at = Column(DateTime(timezone=True), server_default=func.now())

    __table_args__ = (
        Index("idx_run_algorithm", "algorithm"),
        Index("idx_run_instance", "instance"),
    )

    def __repr__(self) -> str:
        return (
            f"<ExperimentRun(id={self.id}, instance='{self.instance}', "
            f"algorithm='{self.algorithm}', mean_value={self.mean_value})>"
        )
